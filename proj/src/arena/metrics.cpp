#include "bta/arena/metrics.hpp"

#include <algorithm>

#include <json.hpp>

namespace bta::arena {

std::optional<double> TeamMetrics::time_between_kills() const {
    if (kill_ticks.size() < 2) {
        return std::nullopt;
    }
    return static_cast<double>(kill_ticks.back() - kill_ticks.front()) / static_cast<double>(kill_ticks.size() - 1);
}

int oracle_kill_ticks(const CombatRules& rules) {
    const int shots = (rules.max_health + rules.damage - 1) / rules.damage;
    return 1 + shots;
}

std::optional<double> time_between_kills_score(const TeamMetrics& team, const CombatRules& rules) {
    const auto tbk = team.time_between_kills();
    if (!tbk) {
        return std::nullopt;
    }
    return std::min(1.0, static_cast<double>(oracle_kill_ticks(rules)) / *tbk);
}

MetricsRecorder::MetricsRecorder(const World& initial) {
    for (const auto& a : initial.agents) {
        AgentMetrics am;
        am.team = a.team;
        m_.agents.push_back(am);
    }
}

void MetricsRecorder::record(const World& after, const std::vector<Event>& events) {
    auto team_of = [&](int id) { return after.agents[static_cast<std::size_t>(id)].team; };
    for (const auto& e : events) {
        switch (e.kind) {
            case EventKind::Shot:
                ++m_.agents[static_cast<std::size_t>(e.actor)].shots;
                ++m_.teams[static_cast<std::size_t>(team_of(e.actor))].shots;
                break;
            case EventKind::Hit: {
                auto& am = m_.agents[static_cast<std::size_t>(e.actor)];
                auto& tm = m_.teams[static_cast<std::size_t>(team_of(e.actor))];
                ++am.hits;
                ++tm.hits;
                am.damage_dealt += after.rules.damage;
                tm.damage_dealt += after.rules.damage;
                break;
            }
            case EventKind::Kill: {
                ++m_.agents[static_cast<std::size_t>(e.target)].deaths;
                ++m_.teams[static_cast<std::size_t>(team_of(e.target))].deaths;
                if (e.actor >= 0) {
                    ++m_.agents[static_cast<std::size_t>(e.actor)].kills;
                    auto& tm = m_.teams[static_cast<std::size_t>(team_of(e.actor))];
                    ++tm.kills;
                    tm.kill_ticks.push_back(e.tick);
                }
                break;
            }
            case EventKind::Warning:
                ++m_.warnings;
                break;
            case EventKind::Respawn:
                break;
        }
    }
    std::array<bool, kTeamCount> present{};
    for (const auto& a : after.agents) {
        if (a.alive && after.map->is_objective(cell_of(a.position))) {
            present[static_cast<std::size_t>(a.team)] = true;
        }
    }
    for (int t = 0; t < kTeamCount; ++t) {
        if (!present[static_cast<std::size_t>(t)] || present[static_cast<std::size_t>(1 - t)]) {
            continue;
        }
        ++m_.teams[static_cast<std::size_t>(t)].objective_ticks;
        for (const auto& a : after.agents) {
            if (a.team == t && a.alive && after.map->is_objective(cell_of(a.position))) {
                ++m_.agents[static_cast<std::size_t>(a.id)].objective_ticks;
            }
        }
    }
}

GameMetrics MetricsRecorder::finish(int episode_length) const {
    GameMetrics out = m_;
    out.episode_length = episode_length;
    return out;
}

namespace {

nlohmann::ordered_json counts_json(const CombatCounts& c) {
    return {{"kills", c.kills},   {"deaths", c.deaths},           {"shots", c.shots},
            {"hits", c.hits},     {"damage_dealt", c.damage_dealt}, {"objective_ticks", c.objective_ticks}};
}

}  // namespace

std::string GameMetrics::to_json() const {
    nlohmann::ordered_json j;
    j["episode_length"] = episode_length;
    j["warnings"] = warnings;
    auto& teams_j = j["teams"] = nlohmann::ordered_json::array();
    for (const auto& t : teams) {
        auto tj = counts_json(t);
        tj["kill_ticks"] = t.kill_ticks;
        const auto tbk = t.time_between_kills();
        tj["time_between_kills"] = tbk ? nlohmann::ordered_json(*tbk) : nlohmann::ordered_json(nullptr);
        teams_j.push_back(tj);
    }
    auto& agents_j = j["agents"] = nlohmann::ordered_json::array();
    for (const auto& a : agents) {
        auto aj = counts_json(a);
        aj["team"] = a.team;
        agents_j.push_back(aj);
    }
    return j.dump();
}

}  // namespace bta::arena
