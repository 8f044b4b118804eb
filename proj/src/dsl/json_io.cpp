#include "bta/dsl/json_io.hpp"

#include <initializer_list>
#include <string_view>

#include <json.hpp>

#include "bta/dsl/parser.hpp"

namespace bta::dsl {

using nlohmann::json;

SchemaError::SchemaError(std::string pointer, const std::string& message)
    : Error("bad-schema", (pointer.empty() ? std::string("/") : pointer) + ": " + message),
      pointer_(std::move(pointer)) {}

namespace {

json node_to_json(const BtNode& node) {
    json j;
    j["type"] = std::string(to_string(node.kind));
    switch (node.kind) {
        case NodeKind::Condition:
            j["key"] = node.key;
            j["negated"] = node.negated;
            break;
        case NodeKind::Task:
            j["action"] = node.action;
            j["param"] = node.param ? json(*node.param) : json(nullptr);
            break;
        case NodeKind::Selector:
        case NodeKind::Sequence:
            j["children"] = json::array();
            for (const auto& c : node.children) {
                j["children"].push_back(node_to_json(c));
            }
            break;
    }
    return j;
}

void allow_only(const json& j, const std::string& at, std::initializer_list<std::string_view> keys) {
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (auto allowed : keys) {
            ok = ok || k == allowed;
        }
        if (!ok) {
            throw SchemaError(at + "/" + k, "unexpected field");
        }
    }
}

std::string identifier_field(const json& j, const std::string& at, const char* name) {
    const std::string ptr = at + "/" + name;
    if (!j.contains(name)) {
        throw SchemaError(ptr, "missing required field");
    }
    const auto& v = j.at(name);
    if (!v.is_string()) {
        throw SchemaError(ptr, "expected a string");
    }
    auto s = v.get<std::string>();
    if (!is_identifier(s)) {
        throw SchemaError(ptr, "'" + s + "' is not an identifier");
    }
    return s;
}

BtNode node_from_json(const json& j, const std::string& at, int depth) {
    if (depth > kMaxNesting) {
        throw SchemaError(at, "nesting exceeds " + std::to_string(kMaxNesting) + " levels");
    }
    if (!j.is_object()) {
        throw SchemaError(at, "expected a node object");
    }
    if (!j.contains("type")) {
        throw SchemaError(at + "/type", "missing required field");
    }
    if (!j.at("type").is_string()) {
        throw SchemaError(at + "/type", "expected a string");
    }
    const auto type = j.at("type").get<std::string>();
    BtNode node;
    if (type == "condition") {
        allow_only(j, at, {"type", "key", "negated"});
        node.kind = NodeKind::Condition;
        node.key = identifier_field(j, at, "key");
        if (node.key == "no") {
            throw SchemaError(at + "/key", "'no' is reserved for negation");
        }
        if (j.contains("negated")) {
            if (!j.at("negated").is_boolean()) {
                throw SchemaError(at + "/negated", "expected a boolean");
            }
            node.negated = j.at("negated").get<bool>();
        }
    } else if (type == "task") {
        allow_only(j, at, {"type", "action", "param"});
        node.kind = NodeKind::Task;
        node.action = identifier_field(j, at, "action");
        if (j.contains("param") && !j.at("param").is_null()) {
            node.param = identifier_field(j, at, "param");
        }
    } else if (type == "selector" || type == "sequence") {
        allow_only(j, at, {"type", "children"});
        node.kind = type == "selector" ? NodeKind::Selector : NodeKind::Sequence;
        if (!j.contains("children")) {
            throw SchemaError(at + "/children", "missing required field");
        }
        const auto& kids = j.at("children");
        if (!kids.is_array()) {
            throw SchemaError(at + "/children", "expected an array");
        }
        if (kids.empty()) {
            throw SchemaError(at + "/children", "composite nodes need at least one child");
        }
        for (std::size_t i = 0; i < kids.size(); ++i) {
            node.children.push_back(node_from_json(kids[i], at + "/children/" + std::to_string(i), depth + 1));
        }
    } else {
        throw SchemaError(at + "/type", "unknown node type '" + type + "'");
    }
    return node;
}

}  // namespace

std::string to_json(const BtNode& tree) {
    json doc;
    doc["version"] = kJsonFormatVersion;
    doc["root"] = node_to_json(tree);
    return doc.dump(2) + "\n";
}

BtNode from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("", std::string("malformed JSON: ") + e.what());
    }
    if (doc.is_object() && doc.contains("root")) {
        allow_only(doc, "", {"version", "root"});
        if (!doc.contains("version")) {
            throw SchemaError("/version", "missing required field");
        }
        const auto& v = doc.at("version");
        if (!v.is_number_integer() || v.get<long long>() != kJsonFormatVersion) {
            throw SchemaError("/version", "unsupported version");
        }
        return node_from_json(doc.at("root"), "/root", 1);
    }
    return node_from_json(doc, "", 1);
}

}  // namespace bta::dsl
