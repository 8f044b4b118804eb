#pragma once

#include <string>

#include "bta/core/error.hpp"
#include "bta/dsl/ast.hpp"

namespace bta::dsl {

inline constexpr int kJsonFormatVersion = 1;

class SchemaError : public Error {
public:
    SchemaError(std::string pointer, const std::string& message);

    // JSON pointer (RFC 6901) of the offending value.
    const std::string& pointer() const noexcept { return pointer_; }

private:
    std::string pointer_;
};

// {"version": 1, "root": node}
std::string to_json(const BtNode& tree);

// Accepts the versioned document or a bare node object. Throws SchemaError
// (code "bad-schema") on any violation.
BtNode from_json(const std::string& text);

}  // namespace bta::dsl
