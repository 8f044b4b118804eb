#pragma once

#include <string>

#include "bta/dsl/ast.hpp"

namespace bta::dsl {

// Two-space indented text; negated conditions use the two-line
// `condition: no` form. Always ends with a newline.
std::string to_canonical_dsl(const BtNode& tree);

}  // namespace bta::dsl
