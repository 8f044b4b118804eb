#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bta/core/error.hpp"
#include "bta/dsl/ast.hpp"

namespace bta::dsl {

inline constexpr int kIndentUnit = 2;
// Hard nesting limit of the parser itself; the (much lower) deployment depth
// bound is a validation concern.
inline constexpr int kMaxNesting = 64;

struct ParseResult {
    std::optional<BtNode> tree;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return tree.has_value(); }
};

// Total over arbitrary input: returns either a tree or at least one error.
ParseResult parse(std::string_view source);

class ParseError : public Error {
public:
    explicit ParseError(std::vector<Diagnostic> diagnostics);

    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

BtNode parse_or_throw(std::string_view source);

}  // namespace bta::dsl
