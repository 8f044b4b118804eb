#pragma once

#include <optional>
#include <string>

#include "bta/dsl/catalog.hpp"
#include "bta/genkit/template.hpp"

namespace bta::genkit {

// The stock tree-design prompt. Section headers and placeholder paths follow
// the common layout used by our generation prompts; history is optional.
const std::string& default_prompt_template();

struct PromptHistory {
    std::string dsl_tree;  // last attempt
    std::string message;   // what was wrong with it / how it played
};

struct PromptInputs {
    std::string scenario;  // free-text game description
    std::string tactics;   // what the tree should do
    std::optional<PromptHistory> history;
};

// Node documentation lines for one catalog, e.g. "- has_enemy_in_view: ...".
std::string describe_conditions(const dsl::NodeCatalog& catalog);
std::string describe_actions(const dsl::NodeCatalog& catalog);
std::string describe_params(const dsl::NodeCatalog& catalog);

TemplateContext prompt_context(const dsl::NodeCatalog& catalog, const PromptInputs& inputs);

std::string render_prompt(const dsl::NodeCatalog& catalog, const PromptInputs& inputs,
                          const std::string& tmpl = default_prompt_template());

}  // namespace bta::genkit
