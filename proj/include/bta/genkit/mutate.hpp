#pragma once

#include <optional>
#include <vector>

#include "bta/core/rng.hpp"
#include "bta/dsl/ast.hpp"
#include "bta/dsl/catalog.hpp"

namespace bta::genkit {

enum class MutationOp { Swap, Rekey, Insert, Remove, Negate, Reparam };

inline constexpr int kMutationOpCount = 6;

std::string_view to_string(MutationOp op);

// Relative operator weights.
struct MutationWeights {
    double swap = 0.2;
    double rekey = 0.3;
    double insert = 0.2;
    double remove = 0.15;
    double negate = 0.1;
    double reparam = 0.05;

    double weight(MutationOp op) const;
};

// Every operator changes the tree by at most two node insertions, deletions
// or relabels:
//   Swap    - exchange adjacent siblings, at least one of them a leaf
//   Rekey   - replace a condition key with another catalog condition, or a
//             task with another action
//   Insert  - wrap a subtree as `sequence: [guard condition, subtree]`, or
//             add a catalog task as a new selector child
//   Remove  - drop a subtree of at most two nodes from a composite with
//             siblings, or unwrap `sequence/selector: [condition, X]` to X
//   Negate  - toggle a condition's negation
//   Reparam - switch a task to another permitted param
// Returns nullopt when the operator has no applicable site.
std::optional<dsl::BtNode> apply_mutation(const dsl::BtNode& tree, MutationOp op, const dsl::NodeCatalog& catalog,
                                          Rng& rng);

// One weighted, validated edit. Throws bta::Error("no-mutation") when no
// valid edit was found after a bounded number of attempts.
dsl::BtNode mutate(const dsl::BtNode& tree, const dsl::NodeCatalog& catalog, Rng& rng,
                   const MutationWeights& weights = {});

// Up to n distinct valid variants, each one edit away from `tree` and
// different from it. Fewer come back only for trees with tiny neighbourhoods.
std::vector<dsl::BtNode> mutate_distinct(const dsl::BtNode& tree, const dsl::NodeCatalog& catalog, int n, Rng& rng,
                                         const MutationWeights& weights = {});

}  // namespace bta::genkit
