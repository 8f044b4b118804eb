#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "bta/core/error.hpp"
#include "bta/search/evaluate.hpp"
#include "bta/search/tactical.hpp"

namespace bta::search::detail {

using nlohmann::json;

inline json opt_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline std::optional<double> get_opt_number(const json& j) {
    if (j.is_null()) {
        return std::nullopt;
    }
    return j.get<double>();
}

inline json tactical_scores_json(const TacticalReport& r) {
    json j = json::object();
    for (int i = 0; i < kDimensionCount; ++i) {
        j[std::string(to_string(static_cast<Dimension>(i)))] = r.scores[static_cast<std::size_t>(i)];
    }
    return j;
}

inline json tactical_json(const TacticalReport& r) {
    json notes = json::object();
    for (int i = 0; i < kDimensionCount; ++i) {
        notes[std::string(to_string(static_cast<Dimension>(i)))] = r.notes[static_cast<std::size_t>(i)];
    }
    return {{"scores", tactical_scores_json(r)}, {"notes", notes}};
}

inline TacticalReport tactical_scores_from_json(const json& scores) {
    TacticalReport r;
    for (int i = 0; i < kDimensionCount; ++i) {
        r.scores[static_cast<std::size_t>(i)] = scores.at(std::string(to_string(static_cast<Dimension>(i)))).get<double>();
    }
    return r;
}

inline TacticalReport tactical_from_json(const json& j) {
    auto r = tactical_scores_from_json(j.at("scores"));
    for (int i = 0; i < kDimensionCount; ++i) {
        r.notes[static_cast<std::size_t>(i)] =
            j.at("notes").at(std::string(to_string(static_cast<Dimension>(i)))).get<std::string>();
    }
    return r;
}

inline json summary_json(const MetricsSummary& m) {
    return {{"episodes", m.episodes},
            {"kills", m.kills},
            {"deaths", m.deaths},
            {"shots", m.shots},
            {"hits", m.hits},
            {"damage", m.damage},
            {"objective_ticks", m.objective_ticks},
            {"time_between_kills", opt_number(m.time_between_kills)}};
}

inline MetricsSummary summary_from_json(const json& j) {
    MetricsSummary m;
    m.episodes = j.at("episodes").get<int>();
    m.kills = j.at("kills").get<double>();
    m.deaths = j.at("deaths").get<double>();
    m.shots = j.at("shots").get<double>();
    m.hits = j.at("hits").get<double>();
    m.damage = j.at("damage").get<double>();
    m.objective_ticks = j.at("objective_ticks").get<double>();
    m.time_between_kills = get_opt_number(j.at("time_between_kills"));
    return m;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("io", "cannot write " + tmp);
        }
        out << text;
        if (!out) {
            throw Error("io", "write failed: " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw Error("io", "cannot replace " + path);
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("io", "cannot read " + path);
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace bta::search::detail
