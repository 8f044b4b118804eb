#include "bta/dsl/ast.hpp"

#include <algorithm>

namespace bta::dsl {

std::string_view to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::Selector: return "selector";
        case NodeKind::Sequence: return "sequence";
        case NodeKind::Condition: return "condition";
        case NodeKind::Task: return "task";
    }
    return "?";
}

BtNode BtNode::selector(std::vector<BtNode> children) {
    BtNode n;
    n.kind = NodeKind::Selector;
    n.children = std::move(children);
    return n;
}

BtNode BtNode::sequence(std::vector<BtNode> children) {
    BtNode n;
    n.kind = NodeKind::Sequence;
    n.children = std::move(children);
    return n;
}

BtNode BtNode::condition(std::string key, bool negated) {
    BtNode n;
    n.kind = NodeKind::Condition;
    n.key = std::move(key);
    n.negated = negated;
    return n;
}

BtNode BtNode::task(std::string action, std::optional<std::string> param) {
    BtNode n;
    n.kind = NodeKind::Task;
    n.action = std::move(action);
    n.param = std::move(param);
    return n;
}

bool operator==(const BtNode& a, const BtNode& b) {
    if (a.kind != b.kind) {
        return false;
    }
    switch (a.kind) {
        case NodeKind::Condition:
            return a.key == b.key && a.negated == b.negated;
        case NodeKind::Task:
            return a.action == b.action && a.param == b.param;
        case NodeKind::Selector:
        case NodeKind::Sequence:
            return a.children == b.children;
    }
    return false;
}

std::size_t node_count(const BtNode& tree) {
    std::size_t n = 1;
    for (const auto& c : tree.children) {
        n += node_count(c);
    }
    return n;
}

std::size_t tree_depth(const BtNode& tree) {
    std::size_t deepest = 0;
    for (const auto& c : tree.children) {
        deepest = std::max(deepest, tree_depth(c));
    }
    return deepest + 1;
}

bool is_identifier(std::string_view text) {
    if (text.empty()) {
        return false;
    }
    const auto head = text.front();
    if (!(head == '_' || (head >= 'a' && head <= 'z'))) {
        return false;
    }
    return std::all_of(text.begin() + 1, text.end(), [](char c) {
        return c == '_' || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    });
}

std::string format_diagnostic(const Diagnostic& d) {
    std::string out = std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": ";
    out += d.severity == Severity::Error ? "error" : "warning";
    out += " [" + d.code + "] " + d.message;
    return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

}  // namespace bta::dsl
