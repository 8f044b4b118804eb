#pragma once

#include <stdexcept>
#include <string>

namespace bta {

// Every recoverable failure in the library carries a short machine code
// ("bad-schema", "dim-mismatch", ...) next to the human message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message);

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

}  // namespace bta
