#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bta/arena/world.hpp"

namespace bta::arena {

struct CombatCounts {
    int kills = 0;
    int deaths = 0;
    int shots = 0;
    int hits = 0;
    int damage_dealt = 0;
    int objective_ticks = 0;

    friend bool operator==(const CombatCounts&, const CombatCounts&) = default;
};

struct TeamMetrics : CombatCounts {
    std::vector<int> kill_ticks;

    // Mean tick gap between consecutive kills; absent below two kills.
    std::optional<double> time_between_kills() const;

    friend bool operator==(const TeamMetrics&, const TeamMetrics&) = default;
};

struct AgentMetrics : CombatCounts {
    int team = 0;

    friend bool operator==(const AgentMetrics&, const AgentMetrics&) = default;
};

struct GameMetrics {
    std::array<TeamMetrics, kTeamCount> teams;
    std::vector<AgentMetrics> agents;
    int episode_length = 0;
    int warnings = 0;

    const TeamMetrics& team(int t) const { return teams.at(static_cast<std::size_t>(t)); }

    std::string to_json() const;

    friend bool operator==(const GameMetrics&, const GameMetrics&) = default;
};

// Fastest possible kill cadence under the combat rules: one aim tick and then
// enough fire ticks to drain a full health bar.
int oracle_kill_ticks(const CombatRules& rules);

// oracle / achieved, capped at 1. Absent when time_between_kills is absent.
std::optional<double> time_between_kills_score(const TeamMetrics& team, const CombatRules& rules);

class MetricsRecorder {
public:
    explicit MetricsRecorder(const World& initial);

    // Call once per step with the post-step world and the events it produced.
    void record(const World& after, const std::vector<Event>& events);

    GameMetrics finish(int episode_length) const;

private:
    GameMetrics m_;
};

}  // namespace bta::arena
