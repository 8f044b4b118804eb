#pragma once

#include <json.hpp>
#include <string>
#include <string_view>

namespace bta::genkit {

// Values are looked up by dotted path ("history.dsl_tree") in a JSON object.
// Strings render verbatim, other scalars in their JSON form.
using TemplateContext = nlohmann::json;

// Supports `{{ path }}` and `{% if path %} ... {% endif %}` (nestable). An
// if-block is kept when the path is bound to something other than null, an
// empty string, false, or an empty container. A tag that sits alone on its
// line takes the whole line with it.
//
// Throws bta::Error with code unbound-path, unclosed-block or bad-syntax;
// messages carry "line:column".
std::string render(std::string_view tmpl, const TemplateContext& context);

// Paths referenced by `{{ }}` outside any if-block, in order of appearance.
std::vector<std::string> required_paths(std::string_view tmpl);

}  // namespace bta::genkit
