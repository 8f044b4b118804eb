#include "bta/genkit/template.hpp"

#include <cctype>
#include <memory>
#include <vector>

#include "bta/core/error.hpp"

namespace bta::genkit {

namespace {

struct Position {
    int line = 1;
    int column = 1;
};

std::string where(Position p) { return std::to_string(p.line) + ":" + std::to_string(p.column); }

struct Piece {
    enum class Kind { Text, Var, If, EndIf } kind = Kind::Text;
    std::string text;  // literal text or path
    Position pos;
};

bool is_path(std::string_view s) {
    if (s.empty() || s.front() == '.' || s.back() == '.') {
        return false;
    }
    char prev = '.';
    for (char c : s) {
        const bool word = std::isalnum(static_cast<unsigned char>(c)) || c == '_';
        if (!word && c != '.') {
            return false;
        }
        if (c == '.' && prev == '.') {
            return false;
        }
        prev = c;
    }
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Piece> run() {
        std::vector<Piece> out;
        std::string text;
        Position text_pos = pos_;
        while (i_ < src_.size()) {
            if (src_.compare(i_, 2, "{{") == 0 || src_.compare(i_, 2, "{%") == 0) {
                const bool block = src_[i_ + 1] == '%';
                const Position start = pos_;
                const std::size_t line_start = src_.rfind('\n', i_ == 0 ? 0 : i_ - 1);
                const std::size_t bol = (line_start == std::string_view::npos || i_ == 0) ? 0 : line_start + 1;
                const std::string_view close = block ? "%}" : "}}";
                const std::size_t end = src_.find(close, i_ + 2);
                if (end == std::string_view::npos) {
                    throw Error("unclosed-block", where(start) + ": tag is never closed");
                }
                const std::string_view body = trim(src_.substr(i_ + 2, end - i_ - 2));
                Piece p;
                p.pos = start;
                if (!block) {
                    if (!is_path(body)) {
                        throw Error("bad-syntax", where(start) + ": expected a dotted path, got '" + std::string(body) + "'");
                    }
                    p.kind = Piece::Kind::Var;
                    p.text = std::string(body);
                } else if (body == "endif") {
                    p.kind = Piece::Kind::EndIf;
                } else if (body.substr(0, 3) == "if " && is_path(trim(body.substr(3)))) {
                    p.kind = Piece::Kind::If;
                    p.text = std::string(trim(body.substr(3)));
                } else {
                    throw Error("bad-syntax", where(start) + ": unsupported tag '" + std::string(body) + "'");
                }
                std::size_t after = end + 2;
                if (block) {
                    // Standalone block tags swallow their line.
                    const bool blank_before = trim(src_.substr(bol, i_ - bol)).empty() &&
                                              text.size() >= i_ - bol;
                    std::size_t eol = src_.find('\n', after);
                    const std::size_t line_end = eol == std::string_view::npos ? src_.size() : eol;
                    const bool blank_after = trim(src_.substr(after, line_end - after)).empty();
                    if (blank_before && blank_after) {
                        text.resize(text.size() - (i_ - bol));
                        advance_to(eol == std::string_view::npos ? src_.size() : eol + 1);
                        flush(out, text, text_pos);
                        out.push_back(p);
                        text_pos = pos_;
                        continue;
                    }
                }
                advance_to(after);
                flush(out, text, text_pos);
                out.push_back(p);
                text_pos = pos_;
                continue;
            }
            text.push_back(src_[i_]);
            advance_to(i_ + 1);
        }
        flush(out, text, text_pos);
        return out;
    }

private:
    void advance_to(std::size_t target) {
        while (i_ < target) {
            if (src_[i_] == '\n') {
                ++pos_.line;
                pos_.column = 1;
            } else {
                ++pos_.column;
            }
            ++i_;
        }
    }

    static void flush(std::vector<Piece>& out, std::string& text, Position pos) {
        if (!text.empty()) {
            out.push_back({Piece::Kind::Text, std::move(text), pos});
            text.clear();
        }
    }

    std::string_view src_;
    std::size_t i_ = 0;
    Position pos_;
};

struct Node {
    Piece piece;
    std::vector<Node> children;  // If only
};

std::vector<Node> build(const std::vector<Piece>& pieces) {
    std::vector<Node> root;
    std::vector<std::vector<Node>*> stack = {&root};
    std::vector<Position> opened;
    for (const auto& p : pieces) {
        switch (p.kind) {
            case Piece::Kind::Text:
            case Piece::Kind::Var: stack.back()->push_back({p, {}}); break;
            case Piece::Kind::If:
                stack.back()->push_back({p, {}});
                stack.push_back(&stack.back()->back().children);
                opened.push_back(p.pos);
                break;
            case Piece::Kind::EndIf:
                if (opened.empty()) {
                    throw Error("bad-syntax", where(p.pos) + ": endif without if");
                }
                stack.pop_back();
                opened.pop_back();
                break;
        }
    }
    if (!opened.empty()) {
        throw Error("unclosed-block", where(opened.back()) + ": if-block has no endif");
    }
    return root;
}

const nlohmann::json* lookup(const nlohmann::json& ctx, const std::string& path) {
    const nlohmann::json* cur = &ctx;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = path.find('.', start);
        const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (!cur->is_object()) {
            return nullptr;
        }
        const auto it = cur->find(part);
        if (it == cur->end()) {
            return nullptr;
        }
        cur = &*it;
        if (dot == std::string::npos) {
            return cur;
        }
        start = dot + 1;
    }
}

bool truthy(const nlohmann::json* v) {
    if (v == nullptr || v->is_null()) {
        return false;
    }
    if (v->is_string()) {
        return !v->get_ref<const std::string&>().empty();
    }
    if (v->is_array() || v->is_object()) {
        return !v->empty();
    }
    if (v->is_boolean()) {
        return v->get<bool>();
    }
    return true;
}

void emit(const std::vector<Node>& nodes, const nlohmann::json& ctx, std::string& out) {
    for (const auto& n : nodes) {
        switch (n.piece.kind) {
            case Piece::Kind::Text: out += n.piece.text; break;
            case Piece::Kind::Var: {
                const auto* v = lookup(ctx, n.piece.text);
                if (v == nullptr || v->is_null()) {
                    throw Error("unbound-path", where(n.piece.pos) + ": '" + n.piece.text + "' is not bound");
                }
                out += v->is_string() ? v->get<std::string>() : v->dump();
                break;
            }
            case Piece::Kind::If:
                if (truthy(lookup(ctx, n.piece.text))) {
                    emit(n.children, ctx, out);
                }
                break;
            case Piece::Kind::EndIf: break;
        }
    }
}

}  // namespace

std::string render(std::string_view tmpl, const TemplateContext& context) {
    const auto nodes = build(Lexer(tmpl).run());
    std::string out;
    emit(nodes, context, out);
    return out;
}

std::vector<std::string> required_paths(std::string_view tmpl) {
    std::vector<std::string> out;
    for (const auto& n : build(Lexer(tmpl).run())) {
        if (n.piece.kind == Piece::Kind::Var) {
            out.push_back(n.piece.text);
        }
    }
    return out;
}

}  // namespace bta::genkit
