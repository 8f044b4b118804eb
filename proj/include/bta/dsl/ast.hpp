#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bta::dsl {

enum class NodeKind { Selector, Sequence, Condition, Task };

std::string_view to_string(NodeKind kind);

struct SourceSpan {
    int line = 0;    // 1-based; 0 when the node did not come from text
    int column = 0;  // 1-based

    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

// One node of the policy structure. Composites own their children by value,
// so a BtNode is always a finite tree.
struct BtNode {
    NodeKind kind = NodeKind::Selector;
    std::string key;                   // Condition
    bool negated = false;              // Condition
    std::string action;                // Task
    std::optional<std::string> param;  // Task
    std::vector<BtNode> children;      // Selector / Sequence
    SourceSpan span;

    static BtNode selector(std::vector<BtNode> children);
    static BtNode sequence(std::vector<BtNode> children);
    static BtNode condition(std::string key, bool negated = false);
    static BtNode task(std::string action, std::optional<std::string> param = std::nullopt);

    bool is_composite() const { return kind == NodeKind::Selector || kind == NodeKind::Sequence; }

    // Structural equality; source spans are diagnostics only and never compared.
    friend bool operator==(const BtNode& a, const BtNode& b);
};

std::size_t node_count(const BtNode& tree);
// A lone leaf has depth 1.
std::size_t tree_depth(const BtNode& tree);

bool is_identifier(std::string_view text);

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    SourceSpan span;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::string format_diagnostic(const Diagnostic& d);
bool has_errors(const std::vector<Diagnostic>& diagnostics);

}  // namespace bta::dsl
