#include "bta/neural/features.hpp"

#include <algorithm>
#include <cmath>

#include "bta/arena/navigation.hpp"

namespace bta::neural {

TaskObservation encode_task_observation(const arena::MapSpec& map, Vec2 position, Vec2 facing, Vec2 goal) {
    TaskObservation f;
    f.reserve(kTaskObservationSize);
    const Vec2 d = goal - position;
    const double scale = std::max(d.norm(), kGoalScale);
    f.push_back(d.x / scale);
    f.push_back(d.y / scale);

    const int max_steps = static_cast<int>(kRayReach / arena::kMoveStep);
    for (int dir = 0; dir < arena::kDirectionCount; ++dir) {
        Vec2 p = position;
        int steps = 0;
        while (steps < max_steps) {
            const auto next = arena::try_move(map, p, dir);
            if (!next) {
                break;
            }
            p = *next;
            ++steps;
        }
        f.push_back(2.0 * (steps * arena::kMoveStep) / kRayReach - 1.0);
    }

    const Vec2 face = facing.normalized();
    f.push_back(face.x);
    f.push_back(face.y);

    const arena::Cell c = arena::cell_of(position);
    for (int dy = -kPatchRadius; dy <= kPatchRadius; ++dy) {
        for (int dx = -kPatchRadius; dx <= kPatchRadius; ++dx) {
            f.push_back(map.blocked({c.x + dx, c.y + dy}) ? 1.0 : -1.0);
        }
    }
    return f;
}

std::vector<bool> move_legality(const arena::MapSpec& map, Vec2 position) {
    std::vector<bool> legal(kMoveOutputs, true);
    for (int dir = 0; dir < arena::kDirectionCount; ++dir) {
        legal[static_cast<std::size_t>(dir)] = arena::try_move(map, position, dir).has_value();
    }
    return legal;
}

}  // namespace bta::neural
