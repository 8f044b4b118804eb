#include "bta/scheduler/library.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "bta/core/error.hpp"
#include "bta/dsl/json_io.hpp"
#include "bta/dsl/parser.hpp"
#include "bta/dsl/validate.hpp"
#include "bta/fps/catalog.hpp"
#include "bta/fps/match.hpp"
#include "bta/fps/scenarios.hpp"

namespace bta::scheduler {

using nlohmann::json;

PolicyLibrary::PolicyLibrary(std::vector<LibraryEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw Error("bad-library", "a policy library needs at least one tree");
    }
    static const auto catalog = fps::shooter_catalog();
    std::set<std::string> seen;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (!seen.insert(e.description).second) {
            throw Error("bad-library", "duplicate description \"" + e.description + "\"");
        }
        const auto diags = dsl::validate(e.tree, catalog);
        if (dsl::has_errors(diags)) {
            std::string first;
            for (const auto& d : diags) {
                if (d.severity == dsl::Severity::Error) {
                    first = dsl::format_diagnostic(d);
                    break;
                }
            }
            throw Error("bad-library", "entry " + std::to_string(i) + ": " + first);
        }
    }
}

std::vector<btree::CompiledPolicy> PolicyLibrary::compile() const {
    std::vector<btree::CompiledPolicy> out;
    for (const auto& e : entries_) {
        const auto weights = e.weights ? fps::load_task_weights(*e.weights) : fps::TaskWeights{};
        out.push_back(fps::compile_shooter(e.tree, weights));
    }
    return out;
}

std::string PolicyLibrary::to_manifest() const {
    json out = json::array();
    for (const auto& e : entries_) {
        json j{{"description", e.description}, {"tree", json::parse(dsl::to_json(e.tree))}};
        if (e.weights) {
            j["weights"] = *e.weights;
        }
        out.push_back(std::move(j));
    }
    return out.dump(2) + "\n";
}

PolicyLibrary PolicyLibrary::from_manifest(const std::string& text, const std::string& base_dir) {
    std::vector<LibraryEntry> entries;
    try {
        const auto doc = json::parse(text);
        if (!doc.is_array()) {
            throw Error("bad-library", "manifest must be a JSON array");
        }
        for (const auto& item : doc) {
            LibraryEntry e;
            e.description = item.at("description").get<std::string>();
            e.tree = dsl::from_json(item.at("tree").dump());
            if (item.contains("weights") && !item.at("weights").is_null()) {
                std::filesystem::path p = item.at("weights").get<std::string>();
                if (p.is_relative() && !base_dir.empty()) {
                    p = std::filesystem::path(base_dir) / p;
                }
                e.weights = p.string();
            }
            entries.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        throw Error("bad-library", e.what());
    } catch (const dsl::SchemaError& e) {
        throw Error("bad-library", std::string("tree: ") + e.what());
    }
    return PolicyLibrary(std::move(entries));
}

PolicyLibrary PolicyLibrary::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("io", "cannot read " + path);
    }
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return from_manifest(text, std::filesystem::path(path).parent_path().string());
}

PolicyLibrary default_library() {
    return PolicyLibrary({
        {"aggressive: shoot on sight, otherwise hunt remembered enemies",
         dsl::parse_or_throw(fps::aggressive_tree_text()), std::nullopt},
        {"camper: shoot on sight, fall back when hurt, otherwise hold position",
         dsl::parse_or_throw(fps::camper_tree_text()), std::nullopt},
    });
}

}  // namespace bta::scheduler
