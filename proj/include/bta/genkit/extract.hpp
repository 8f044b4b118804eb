#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace bta::genkit {

struct Extracted {
    std::string reflection;
    std::string think;
    std::optional<std::string> dsl;
};

// Contents of the first <reflection> and <think> spans plus the DSL block.
// Tags may nest but not overlap. Throws bta::Error("malformed-tags").
Extracted extract_tagged(std::string_view completion);

// The first ``` fenced block, else the longest run of lines that each look
// like a DSL line (blank lines and # comments may sit inside a run). The
// result is dedented so its shallowest line starts at column 1.
std::optional<std::string> extract_dsl(std::string_view text);

}  // namespace bta::genkit
