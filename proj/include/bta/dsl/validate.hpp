#pragma once

#include <cstddef>
#include <vector>

#include "bta/dsl/ast.hpp"
#include "bta/dsl/catalog.hpp"

namespace bta::dsl {

struct ValidationLimits {
    std::size_t max_depth = 12;   // exceeding it is a warning
    std::size_t max_nodes = 256;  // exceeding it is an error
};

// Empty result means the tree is deployable against `catalog`.
std::vector<Diagnostic> validate(const BtNode& tree, const NodeCatalog& catalog, const ValidationLimits& limits = {});

}  // namespace bta::dsl
