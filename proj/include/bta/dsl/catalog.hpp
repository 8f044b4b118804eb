#pragma once

#include <optional>
#include <string>
#include <vector>

namespace bta::dsl {

struct ConditionSpec {
    std::string key;
    std::string doc;
};

struct ParamSpec {
    std::string key;
    std::string doc;
};

struct ActionSpec {
    std::string key;
    std::string doc;
    std::vector<ParamSpec> params;  // permitted param keys, possibly empty
    bool requires_param = false;
    // Conditions that usually guard this action; a hint for tree mutation only.
    std::vector<std::string> guards;
};

// The basic nodes a generated tree may reference.
class NodeCatalog {
public:
    NodeCatalog() = default;
    NodeCatalog(std::vector<ConditionSpec> conditions, std::vector<ActionSpec> actions);

    const std::vector<ConditionSpec>& conditions() const { return conditions_; }
    const std::vector<ActionSpec>& actions() const { return actions_; }

    const ConditionSpec* find_condition(const std::string& key) const;
    const ActionSpec* find_action(const std::string& key) const;
    bool permits_param(const std::string& action, const std::string& param) const;

    std::string to_json() const;
    // Throws bta::Error("bad-catalog") on schema problems or duplicate keys.
    static NodeCatalog from_json(const std::string& text);
    static NodeCatalog load(const std::string& path);

private:
    std::vector<ConditionSpec> conditions_;
    std::vector<ActionSpec> actions_;
};

}  // namespace bta::dsl
