#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bta/arena/metrics.hpp"
#include "bta/search/tactical.hpp"

namespace bta::search {

// Per-episode quantities the search can optimise, all "higher is better":
//   time_between_kills  oracle cadence / achieved cadence, in (0, 1]
//   kills, deaths (negated), damage, hits, objective_ticks, kill_ratio
//   tactical            mean of the five tactical dimensions / 10
//   map_control, adaptability, team_coordination, team_aggression,
//   goal_achievement    single tactical dimension / 10
// A bundle "kills:1,damage:0.01" sums weighted terms.
struct Objective {
    std::vector<std::pair<std::string, double>> terms;

    std::string name() const;
    bool needs_tactical() const;
    bool operator==(const Objective&) const = default;
};

// Throws bta::Error("bad-objective") naming the unknown term.
Objective parse_objective(const std::string& text);

const std::vector<std::string>& objective_terms();

// One episode's value; nullopt when a term is undefined (time_between_kills
// with fewer than two kills).
std::optional<double> objective_value(const Objective& objective, const arena::GameMetrics& metrics, int team,
                                      const arena::CombatRules& rules, const TacticalReport* tactical);

// Secondary ordering used when the objective is undefined on every episode:
// -1 / (1 + kills + damage / 1000), so it always ranks below any defined
// value of a non-negative objective and -1 is the floor (no kills, no damage).
double fallback_reward(double mean_kills, double mean_damage);

}  // namespace bta::search
