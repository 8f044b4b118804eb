#include "bta/dsl/validate.hpp"

namespace bta::dsl {

namespace {

void check(const BtNode& node, const NodeCatalog& catalog, std::vector<Diagnostic>& out) {
    switch (node.kind) {
        case NodeKind::Condition:
            if (catalog.find_condition(node.key) == nullptr) {
                out.push_back({Severity::Error, "unknown-condition", "condition '" + node.key + "' is not in the catalog",
                               node.span});
            }
            break;
        case NodeKind::Task: {
            const auto* action = catalog.find_action(node.action);
            if (action == nullptr) {
                out.push_back({Severity::Error, "unknown-action", "action '" + node.action + "' is not in the catalog",
                               node.span});
                break;
            }
            if (node.param && !catalog.permits_param(node.action, *node.param)) {
                out.push_back({Severity::Error, "bad-param",
                               "param '" + *node.param + "' is not permitted for action '" + node.action + "'",
                               node.span});
            } else if (!node.param && action->requires_param) {
                out.push_back({Severity::Error, "missing-param", "action '" + node.action + "' requires a param",
                               node.span});
            }
            break;
        }
        case NodeKind::Selector:
        case NodeKind::Sequence:
            for (std::size_t i = 0; i < node.children.size(); ++i) {
                check(node.children[i], catalog, out);
                for (std::size_t j = 0; j < i; ++j) {
                    if (node.children[j] == node.children[i]) {
                        out.push_back({Severity::Warning, "duplicate-sibling",
                                       "subtree repeats sibling #" + std::to_string(j + 1), node.children[i].span});
                        break;
                    }
                }
            }
            break;
    }
}

}  // namespace

std::vector<Diagnostic> validate(const BtNode& tree, const NodeCatalog& catalog, const ValidationLimits& limits) {
    std::vector<Diagnostic> out;
    check(tree, catalog, out);
    if (const auto depth = tree_depth(tree); depth > limits.max_depth) {
        out.push_back({Severity::Warning, "too-deep",
                       "depth " + std::to_string(depth) + " exceeds " + std::to_string(limits.max_depth), tree.span});
    }
    if (const auto count = node_count(tree); count > limits.max_nodes) {
        out.push_back({Severity::Error, "too-many-nodes",
                       std::to_string(count) + " nodes exceed the limit of " + std::to_string(limits.max_nodes),
                       tree.span});
    }
    return out;
}

}  // namespace bta::dsl
