#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>

#include "bta/arena/replay.hpp"

namespace bta::search {

enum class Dimension { MapControl, Adaptability, TeamCoordination, TeamAggression, GoalAchievement };

inline constexpr int kDimensionCount = 5;

std::string_view to_string(Dimension d);  // snake_case key

// Programmatic stand-ins for a reviewer's judgement of one team's play.
// Every score lies in [0, 10].
struct TacticalReport {
    std::array<double, kDimensionCount> scores{};
    std::array<std::string, kDimensionCount> notes;

    double score(Dimension d) const { return scores[static_cast<std::size_t>(d)]; }
    double mean() const;

    friend bool operator==(const TacticalReport&, const TacticalReport&) = default;
};

// Frames sampled for the occupancy measure: every kMapControlStride-th.
inline constexpr int kMapControlStride = 5;

//   map_control       - share of floor cells nearer to a living member of the
//                       team than to any living enemy (ties count half)
//   adaptability      - total-variation distance between the team's verb mix
//                       before and after its first hit exchange
//   team_coordination - 10 / (1 + spread / 4), spread being the mean pairwise
//                       distance of living teammates on ticks they shoot
//   team_aggression   - mean of net advance rate toward the enemy spawns and
//                       fire rate, per living agent-tick
//   goal_achievement  - share of ticks holding the objective, or the kill
//                       ratio on maps without one
// Throws bta::Error("empty-trace") when the trace has no frames.
TacticalReport tactical_analysis(const arena::ReplayTrace& trace, int team);

// Ordinal comparison used by the reflexion checks: a dimension counts when
// `after` is strictly higher, or both sit at the ceiling.
int dimensions_improved(const TacticalReport& before, const TacticalReport& after);

// Per-dimension mean over several reports.
TacticalReport average(std::span<const TacticalReport> reports);

}  // namespace bta::search
