#include "bta/genkit/prompt.hpp"

namespace bta::genkit {

const std::string& default_prompt_template() {
    static const std::string text =
        "# Task\n"
        "Write a behavior tree for a game bot in the indentation DSL described below.\n"
        "Only the nodes listed under Available Nodes exist; anything else is rejected.\n"
        "Aim the tree at the tactic given in the Tactics section.\n"
        "\n"
        "## Game Scenario\n"
        "{{ instructions.scenarios.cs }}\n"
        "\n"
        "## Available Nodes\n"
        "Composite and leaf nodes you can use:\n"
        "{{ instructions.actions.selector }}\n"
        "{{ instructions.actions.sequence }}\n"
        "{{ instructions.actions.condition }}\n"
        "{{ instructions.actions.param }}\n"
        "{{ instructions.actions.action }}\n"
        "\n"
        "## Tactics\n"
        "{{ state.tactics }}\n"
        "\n"
        "## DSL Format\n"
        "{{ instructions.format.dsl_syntax }}\n"
        "\n"
        "## Response\n"
        "{{ instructions.format.dsl_nlu }}\n"
        "\n"
        "{% if history.dsl_tree %}\n"
        "### History Format Errors\n"
        "Your previous tree and the problems found with it follow. Keep what worked and fix the rest.\n"
        "\n"
        "{{ history.dsl_tree }}\n"
        "{{ history.message }}\n"
        "{% endif %}\n";
    return text;
}

namespace {

const char* kSelectorDoc =
    "- selector: runs its children top to bottom and stops at the first one that does not fail. "
    "Earlier children have priority and are re-checked every tick.";
const char* kSequenceDoc =
    "- sequence: runs its children top to bottom and fails as soon as one fails. "
    "A child that is still running is resumed on the next tick.";

const char* kSyntaxDoc =
    "One node per line, nested by two spaces per level.\n"
    "  selector:\n"
    "  sequence:\n"
    "  condition: <condition_key>\n"
    "  task: <action_key> [param_key]\n"
    "To negate a condition, write `condition: no` on one line and the condition on the next line at the same "
    "depth.\n"
    "Example:\n"
    "selector:\n"
    "  sequence:\n"
    "    condition: has_enemy_in_view\n"
    "    task: shoot nearest_enemy_in_view\n"
    "  task: patrol\n";

const char* kResponseDoc =
    "Think about the situation inside <think></think>. If a previous tree is shown, put your assessment of it "
    "inside <reflection></reflection>. Then give the tree in a single ``` fenced block, building it one level at "
    "a time from the root down.";

}  // namespace

std::string describe_conditions(const dsl::NodeCatalog& catalog) {
    std::string out = "Conditions:";
    for (const auto& c : catalog.conditions()) {
        out += "\n- " + c.key + ": " + c.doc;
    }
    return out;
}

std::string describe_actions(const dsl::NodeCatalog& catalog) {
    std::string out = "Actions:";
    for (const auto& a : catalog.actions()) {
        out += "\n- " + a.key + ": " + a.doc;
        if (!a.params.empty()) {
            out += a.requires_param ? " Takes one param:" : " Optional param:";
            for (std::size_t i = 0; i < a.params.size(); ++i) {
                out += (i == 0 ? " " : ", ") + a.params[i].key;
            }
            out += ".";
        }
    }
    return out;
}

std::string describe_params(const dsl::NodeCatalog& catalog) {
    std::string out = "Params:";
    for (const auto& a : catalog.actions()) {
        for (const auto& p : a.params) {
            out += "\n- " + p.key + " (" + a.key + "): " + p.doc;
        }
    }
    return out;
}

TemplateContext prompt_context(const dsl::NodeCatalog& catalog, const PromptInputs& inputs) {
    TemplateContext ctx;
    ctx["instructions"]["scenarios"]["cs"] = inputs.scenario;
    ctx["instructions"]["actions"]["selector"] = kSelectorDoc;
    ctx["instructions"]["actions"]["sequence"] = kSequenceDoc;
    ctx["instructions"]["actions"]["condition"] = describe_conditions(catalog);
    ctx["instructions"]["actions"]["param"] = describe_params(catalog);
    ctx["instructions"]["actions"]["action"] = describe_actions(catalog);
    ctx["instructions"]["format"]["dsl_syntax"] = kSyntaxDoc;
    ctx["instructions"]["format"]["dsl_nlu"] = kResponseDoc;
    ctx["state"]["tactics"] = inputs.tactics;
    if (inputs.history) {
        ctx["history"]["dsl_tree"] = inputs.history->dsl_tree;
        ctx["history"]["message"] = inputs.history->message;
    }
    return ctx;
}

std::string render_prompt(const dsl::NodeCatalog& catalog, const PromptInputs& inputs, const std::string& tmpl) {
    return render(tmpl, prompt_context(catalog, inputs));
}

}  // namespace bta::genkit
