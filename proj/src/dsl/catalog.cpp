#include "bta/dsl/catalog.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bta/core/error.hpp"
#include "bta/dsl/ast.hpp"

namespace bta::dsl {

using nlohmann::json;

NodeCatalog::NodeCatalog(std::vector<ConditionSpec> conditions, std::vector<ActionSpec> actions)
    : conditions_(std::move(conditions)), actions_(std::move(actions)) {
    std::set<std::string> seen;
    for (const auto& c : conditions_) {
        if (!is_identifier(c.key) || c.key == "no") {
            throw Error("bad-catalog", "invalid condition key '" + c.key + "'");
        }
        if (!seen.insert(c.key).second) {
            throw Error("bad-catalog", "duplicate condition key '" + c.key + "'");
        }
    }
    seen.clear();
    for (const auto& a : actions_) {
        if (!is_identifier(a.key)) {
            throw Error("bad-catalog", "invalid action key '" + a.key + "'");
        }
        if (!seen.insert(a.key).second) {
            throw Error("bad-catalog", "duplicate action key '" + a.key + "'");
        }
        std::set<std::string> params;
        for (const auto& p : a.params) {
            if (!is_identifier(p.key) || !params.insert(p.key).second) {
                throw Error("bad-catalog", "bad param key '" + p.key + "' on action '" + a.key + "'");
            }
        }
        if (a.requires_param && a.params.empty()) {
            throw Error("bad-catalog", "action '" + a.key + "' requires a param but permits none");
        }
    }
}

const ConditionSpec* NodeCatalog::find_condition(const std::string& key) const {
    for (const auto& c : conditions_) {
        if (c.key == key) {
            return &c;
        }
    }
    return nullptr;
}

const ActionSpec* NodeCatalog::find_action(const std::string& key) const {
    for (const auto& a : actions_) {
        if (a.key == key) {
            return &a;
        }
    }
    return nullptr;
}

bool NodeCatalog::permits_param(const std::string& action, const std::string& param) const {
    const auto* a = find_action(action);
    if (a == nullptr) {
        return false;
    }
    for (const auto& p : a->params) {
        if (p.key == param) {
            return true;
        }
    }
    return false;
}

std::string NodeCatalog::to_json() const {
    json doc;
    doc["conditions"] = json::array();
    for (const auto& c : conditions_) {
        doc["conditions"].push_back({{"key", c.key}, {"doc", c.doc}});
    }
    doc["actions"] = json::array();
    for (const auto& a : actions_) {
        json params = json::array();
        for (const auto& p : a.params) {
            params.push_back({{"key", p.key}, {"doc", p.doc}});
        }
        json entry = {{"key", a.key}, {"doc", a.doc}, {"params", params}, {"requires_param", a.requires_param}};
        if (!a.guards.empty()) {
            entry["guards"] = a.guards;
        }
        doc["actions"].push_back(entry);
    }
    return doc.dump(2) + "\n";
}

NodeCatalog NodeCatalog::from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        std::vector<ConditionSpec> conditions;
        for (const auto& c : doc.at("conditions")) {
            conditions.push_back({c.at("key").get<std::string>(), c.value("doc", std::string{})});
        }
        std::vector<ActionSpec> actions;
        for (const auto& a : doc.at("actions")) {
            ActionSpec spec;
            spec.key = a.at("key").get<std::string>();
            spec.doc = a.value("doc", std::string{});
            spec.requires_param = a.value("requires_param", false);
            if (a.contains("params")) {
                for (const auto& p : a.at("params")) {
                    spec.params.push_back({p.at("key").get<std::string>(), p.value("doc", std::string{})});
                }
            }
            if (a.contains("guards")) {
                spec.guards = a.at("guards").get<std::vector<std::string>>();
            }
            actions.push_back(std::move(spec));
        }
        return NodeCatalog(std::move(conditions), std::move(actions));
    } catch (const json::exception& e) {
        throw Error("bad-catalog", e.what());
    }
}

NodeCatalog NodeCatalog::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("io", "cannot open catalog '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

}  // namespace bta::dsl
