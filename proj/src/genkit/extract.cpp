#include "bta/genkit/extract.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>
#include <vector>

#include "bta/core/error.hpp"

namespace bta::genkit {

namespace {

const std::array<std::string_view, 2> kTags = {"think", "reflection"};

struct Span {
    std::size_t open_begin;
    std::size_t open_end;
    std::size_t close_begin;
    std::size_t close_end;
};

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) {
                lines.push_back(text.substr(start));
            }
            break;
        }
        std::string_view line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        start = nl + 1;
    }
    return lines;
}

bool blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

bool dsl_line(std::string_view line) {
    static const std::regex re(R"(^ *(selector:|sequence:|condition: *[A-Za-z_][A-Za-z0-9_]*|task: *[A-Za-z_][A-Za-z0-9_]*( +[A-Za-z_][A-Za-z0-9_]*)?) *(#.*)?$)");
    return std::regex_match(line.begin(), line.end(), re);
}

bool comment_line(std::string_view line) {
    const auto p = line.find_first_not_of(' ');
    return p != std::string_view::npos && line[p] == '#';
}

std::string dedent(const std::vector<std::string_view>& lines) {
    std::size_t indent = std::string_view::npos;
    for (auto l : lines) {
        if (!blank(l)) {
            indent = std::min(indent, l.find_first_not_of(' '));
        }
    }
    std::string out;
    for (auto l : lines) {
        out += blank(l) ? std::string() : std::string(l.substr(indent));
        out += '\n';
    }
    return out;
}

}  // namespace

std::optional<std::string> extract_dsl(std::string_view text) {
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto l = lines[i];
        const auto p = l.find_first_not_of(' ');
        if (p == std::string_view::npos || l.substr(p, 3) != "```") {
            continue;
        }
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            const auto q = lines[j].find_first_not_of(' ');
            if (q != std::string_view::npos && lines[j].substr(q, 3) == "```") {
                std::vector<std::string_view> body(lines.begin() + static_cast<long>(i) + 1,
                                                   lines.begin() + static_cast<long>(j));
                while (!body.empty() && blank(body.back())) {
                    body.pop_back();
                }
                while (!body.empty() && blank(body.front())) {
                    body.erase(body.begin());
                }
                if (body.empty()) {
                    break;
                }
                return dedent(body);
            }
        }
        break;  // unterminated fence: fall back to line matching
    }

    std::size_t best_begin = 0;
    std::size_t best_count = 0;
    std::size_t i = 0;
    while (i < lines.size()) {
        if (!dsl_line(lines[i])) {
            ++i;
            continue;
        }
        const std::size_t begin = i;
        std::size_t last = i;
        std::size_t count = 0;
        while (i < lines.size() && (dsl_line(lines[i]) || blank(lines[i]) || comment_line(lines[i]))) {
            if (dsl_line(lines[i])) {
                last = i;
                ++count;
            }
            ++i;
        }
        if (count > best_count) {
            best_count = count;
            best_begin = begin;
        }
        i = last + 1;
    }
    if (best_count == 0) {
        return std::nullopt;
    }
    std::vector<std::string_view> block;
    for (std::size_t k = best_begin, seen = 0; seen < best_count; ++k) {
        block.push_back(lines[k]);
        if (dsl_line(lines[k])) {
            ++seen;
        }
    }
    return dedent(block);
}

Extracted extract_tagged(std::string_view completion) {
    struct Open {
        std::string_view tag;
        std::size_t content_begin;
    };
    std::vector<Open> stack;
    Extracted out;
    bool have_think = false;
    bool have_reflection = false;
    std::string outside;
    std::size_t copied = 0;

    std::size_t i = 0;
    while ((i = completion.find('<', i)) != std::string_view::npos) {
        const bool closing = completion.substr(i + 1, 1) == "/";
        std::string_view matched;
        for (auto t : kTags) {
            const std::string token = std::string(closing ? "</" : "<") + std::string(t) + ">";
            if (completion.substr(i, token.size()) == token) {
                matched = t;
            }
        }
        if (matched.empty()) {
            ++i;
            continue;
        }
        const std::size_t token_len = matched.size() + (closing ? 3 : 2);
        if (!closing) {
            if (stack.empty()) {
                outside += std::string(completion.substr(copied, i - copied));
            }
            stack.push_back({matched, i + token_len});
        } else {
            if (stack.empty() || stack.back().tag != matched) {
                throw Error("malformed-tags", "unexpected </" + std::string(matched) + "> at offset " + std::to_string(i));
            }
            const auto content = completion.substr(stack.back().content_begin, i - stack.back().content_begin);
            if (matched == "think" && !have_think) {
                out.think = std::string(content);
                have_think = true;
            } else if (matched == "reflection" && !have_reflection) {
                out.reflection = std::string(content);
                have_reflection = true;
            }
            stack.pop_back();
            if (stack.empty()) {
                copied = i + token_len;
            }
        }
        i += token_len;
    }
    if (!stack.empty()) {
        throw Error("malformed-tags", "<" + std::string(stack.back().tag) + "> is never closed");
    }
    outside += std::string(completion.substr(copied));
    out.dsl = extract_dsl(outside);
    if (!out.dsl) {
        out.dsl = extract_dsl(completion);
    }
    return out;
}

}  // namespace bta::genkit
