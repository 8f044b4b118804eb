#pragma once

#include <vector>

#include "bta/arena/map.hpp"
#include "bta/core/vec2.hpp"

namespace bta::neural {

// Goal offset scaled by max(|d|, kGoalScale) (2), ray clearance in the 8 move directions (8), facing (2),
// 5x5 occupancy patch around the agent's cell (25). Every entry in [-1, 1].
inline constexpr int kTaskObservationSize = 37;
inline constexpr double kGoalScale = 1.0;
inline constexpr double kRayReach = 5.0;
inline constexpr int kPatchRadius = 2;

using TaskObservation = std::vector<double>;

TaskObservation encode_task_observation(const arena::MapSpec& map, Vec2 position, Vec2 facing, Vec2 goal);

// move_to head: the 8 move directions followed by wait.
inline constexpr int kMoveOutputs = 9;
inline constexpr int kMoveWait = 8;
// Which move_to outputs are executable from `position` (wait always is).
std::vector<bool> move_legality(const arena::MapSpec& map, Vec2 position);

// shoot head.
inline constexpr int kShootOutputs = 3;
inline constexpr int kShootAim = 0;
inline constexpr int kShootFire = 1;
inline constexpr int kShootWait = 2;

}  // namespace bta::neural
