#include "bta/dsl/printer.hpp"

namespace bta::dsl {

namespace {

void emit(const BtNode& node, int level, std::string& out) {
    const std::string indent(static_cast<std::size_t>(level) * 2, ' ');
    switch (node.kind) {
        case NodeKind::Selector:
        case NodeKind::Sequence:
            out += indent;
            out += to_string(node.kind);
            out += ":\n";
            for (const auto& c : node.children) {
                emit(c, level + 1, out);
            }
            break;
        case NodeKind::Condition:
            if (node.negated) {
                out += indent + "condition: no\n";
            }
            out += indent + "condition: " + node.key + "\n";
            break;
        case NodeKind::Task:
            out += indent + "task: " + node.action;
            if (node.param) {
                out += " " + *node.param;
            }
            out += "\n";
            break;
    }
}

}  // namespace

std::string to_canonical_dsl(const BtNode& tree) {
    std::string out;
    emit(tree, 0, out);
    return out;
}

}  // namespace bta::dsl
