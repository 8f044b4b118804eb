#include "bta/dsl/parser.hpp"

#include <utility>

namespace bta::dsl {

namespace {

struct RawNode {
    BtNode node;
    int level = 0;
    bool negation_marker = false;
    std::vector<std::size_t> children;
};

Diagnostic error_at(std::string code, std::string message, int line, int column) {
    return Diagnostic{Severity::Error, std::move(code), std::move(message), SourceSpan{line, column}};
}

std::vector<std::string_view> split_tokens(std::string_view text) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && text[i] == ' ') {
            ++i;
        }
        const std::size_t start = i;
        while (i < text.size() && text[i] != ' ') {
            ++i;
        }
        if (i > start) {
            tokens.push_back(text.substr(start, i - start));
        }
    }
    return tokens;
}

std::string display(std::string_view text) {
    std::string out;
    for (char c : text.substr(0, 40)) {
        const auto u = static_cast<unsigned char>(c);
        out += (u >= 0x20 && u < 0x7f) ? c : '?';
    }
    return out;
}

// Parses one non-blank, non-comment line body into a RawNode.
std::optional<RawNode> parse_line(std::string_view body, int line, int column, std::vector<Diagnostic>& out) {
    const auto colon = body.find(':');
    const std::string_view keyword = colon == std::string_view::npos ? body : body.substr(0, colon);
    const bool known = keyword == "selector" || keyword == "sequence" || keyword == "condition" || keyword == "task";
    if (!known) {
        const auto head = colon == std::string_view::npos ? split_tokens(body).front() : keyword;
        if (is_identifier(head)) {
            out.push_back(error_at("unknown-node", "unknown node keyword '" + display(head) + "'", line, column));
        } else {
            out.push_back(error_at("bad-syntax", "expected '<keyword>:' but found '" + display(body) + "'", line, column));
        }
        return std::nullopt;
    }
    if (colon == std::string_view::npos) {
        out.push_back(error_at("bad-syntax", "missing ':' after '" + std::string(keyword) + "'", line, column));
        return std::nullopt;
    }
    const auto tokens = split_tokens(body.substr(colon + 1));
    const int arg_column = column + static_cast<int>(colon) + 1;
    for (auto t : tokens) {
        if (!is_identifier(t)) {
            out.push_back(error_at("bad-syntax", "'" + display(t) + "' is not an identifier", line, arg_column));
            return std::nullopt;
        }
    }

    RawNode raw;
    raw.node.span = SourceSpan{line, column};
    if (keyword == "selector" || keyword == "sequence") {
        if (!tokens.empty()) {
            out.push_back(error_at("bad-syntax", std::string(keyword) + " takes no arguments", line, arg_column));
            return std::nullopt;
        }
        raw.node.kind = keyword == "selector" ? NodeKind::Selector : NodeKind::Sequence;
    } else if (keyword == "condition") {
        if (tokens.size() != 1) {
            out.push_back(error_at("bad-syntax", "condition takes exactly one key", line, arg_column));
            return std::nullopt;
        }
        raw.node.kind = NodeKind::Condition;
        raw.node.key = std::string(tokens[0]);
        raw.negation_marker = tokens[0] == "no";
    } else {
        if (tokens.empty() || tokens.size() > 2) {
            out.push_back(error_at("bad-syntax", "task takes an action key and at most one param key", line, arg_column));
            return std::nullopt;
        }
        raw.node.kind = NodeKind::Task;
        raw.node.action = std::string(tokens[0]);
        if (tokens.size() == 2) {
            raw.node.param = std::string(tokens[1]);
        }
    }
    return raw;
}

class TreeBuilder {
public:
    explicit TreeBuilder(std::vector<RawNode> lines) : nodes_(std::move(lines)) {}

    std::optional<BtNode> build(std::vector<Diagnostic>& out) {
        std::vector<std::size_t> stack;
        std::optional<std::size_t> root;
        bool root_fused = false;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            auto& raw = nodes_[i];
            const auto& span = raw.node.span;
            if (raw.level > kMaxNesting) {
                out.push_back(error_at("too-deep", "nesting exceeds " + std::to_string(kMaxNesting) + " levels",
                                       span.line, span.column));
                return std::nullopt;
            }
            while (!stack.empty() && nodes_[stack.back()].level >= raw.level) {
                stack.pop_back();
            }
            if (stack.empty()) {
                if (raw.level != 0) {
                    out.push_back(error_at("bad-indent", "first node must not be indented", span.line, span.column));
                    return std::nullopt;
                }
                if (root && nodes_[*root].negation_marker && !root_fused && raw.node.kind == NodeKind::Condition &&
                    !raw.negation_marker) {
                    // "condition: no" directly above a root-level condition
                    raw.node.negated = true;
                    raw.node.span = nodes_[*root].node.span;
                    root = i;
                    root_fused = true;
                    stack.push_back(i);
                    continue;
                }
                if (root) {
                    out.push_back(error_at("multiple-roots", "a tree has exactly one root node", span.line, span.column));
                    return std::nullopt;
                }
                root = i;
                stack.push_back(i);
                continue;
            }
            auto& parent = nodes_[stack.back()];
            if (raw.level > parent.level + 1) {
                out.push_back(error_at("bad-indent", "indented more than one level below its parent", span.line,
                                       span.column));
                return std::nullopt;
            }
            if (!parent.node.is_composite()) {
                out.push_back(error_at("leaf-has-children", std::string(to_string(parent.node.kind)) +
                                                                " nodes cannot have children",
                                       span.line, span.column));
                return std::nullopt;
            }
            parent.children.push_back(i);
            stack.push_back(i);
        }
        if (!root) {
            out.push_back(error_at("empty-source", "no nodes found", 1, 1));
            return std::nullopt;
        }
        if (nodes_[*root].negation_marker) {
            const auto& span = nodes_[*root].node.span;
            out.push_back(error_at("dangling-negation", "'condition: no' must precede a sibling condition", span.line,
                                   span.column));
            return std::nullopt;
        }
        auto tree = assemble(*root, out);
        if (!out.empty()) {
            return std::nullopt;
        }
        return tree;
    }

private:
    BtNode assemble(std::size_t index, std::vector<Diagnostic>& out) {
        auto& raw = nodes_[index];
        BtNode node = std::move(raw.node);
        const auto& kids = raw.children;
        for (std::size_t k = 0; k < kids.size(); ++k) {
            auto& child = nodes_[kids[k]];
            if (child.negation_marker) {
                const bool next_is_condition = k + 1 < kids.size() &&
                                               nodes_[kids[k + 1]].node.kind == NodeKind::Condition &&
                                               !nodes_[kids[k + 1]].negation_marker;
                if (!next_is_condition) {
                    out.push_back(error_at("dangling-negation", "'condition: no' must precede a sibling condition",
                                           child.node.span.line, child.node.span.column));
                    continue;
                }
                BtNode fused = std::move(nodes_[kids[k + 1]].node);
                fused.negated = true;
                fused.span = child.node.span;
                node.children.push_back(std::move(fused));
                ++k;
                continue;
            }
            node.children.push_back(assemble(kids[k], out));
        }
        if (node.is_composite() && kids.empty()) {
            out.push_back(error_at("empty-composite", std::string(to_string(node.kind)) + " needs at least one child",
                                   node.span.line, node.span.column));
        }
        return node;
    }

    std::vector<RawNode> nodes_;
};

}  // namespace

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : Error(diagnostics.empty() ? "parse-error" : diagnostics.front().code,
            diagnostics.empty() ? "parse failed" : format_diagnostic(diagnostics.front())),
      diagnostics_(std::move(diagnostics)) {}

ParseResult parse(std::string_view source) {
    ParseResult result;
    std::vector<RawNode> lines;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= source.size()) {
        auto end = source.find('\n', pos);
        if (end == std::string_view::npos) {
            end = source.size();
        }
        std::string_view line = source.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (const auto tab = line.find('\t'); tab != std::string_view::npos) {
            result.diagnostics.push_back(error_at("tabs-forbidden", "tab characters are not allowed; indent with spaces",
                                                  line_no, static_cast<int>(tab) + 1));
            continue;
        }
        std::size_t indent = 0;
        while (indent < line.size() && line[indent] == ' ') {
            ++indent;
        }
        std::string_view body = line.substr(indent);
        while (!body.empty() && body.back() == ' ') {
            body.remove_suffix(1);
        }
        if (body.empty() || body.front() == '#') {
            continue;
        }
        const int column = static_cast<int>(indent) + 1;
        if (indent % kIndentUnit != 0) {
            result.diagnostics.push_back(error_at(
                "bad-indent", "indentation must be a multiple of " + std::to_string(kIndentUnit) + " spaces", line_no,
                column));
            continue;
        }
        auto raw = parse_line(body, line_no, column, result.diagnostics);
        if (raw) {
            raw->level = static_cast<int>(indent) / kIndentUnit;
            lines.push_back(std::move(*raw));
        }
    }
    if (!result.diagnostics.empty()) {
        return result;
    }
    TreeBuilder builder(std::move(lines));
    result.tree = builder.build(result.diagnostics);
    return result;
}

BtNode parse_or_throw(std::string_view source) {
    auto result = parse(source);
    if (!result.ok()) {
        throw ParseError(std::move(result.diagnostics));
    }
    return std::move(*result.tree);
}

}  // namespace bta::dsl
