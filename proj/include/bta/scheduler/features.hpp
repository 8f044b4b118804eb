#pragma once

#include <array>

#include "bta/arena/observation.hpp"

namespace bta::scheduler {

inline constexpr int kFeatureCount = 12;

using Features = std::array<double, kFeatureCount>;

// Scenario aggregates seen by the scheduler, each in [0, 1]:
//   0 own team alive fraction        6 own health
//   1 enemy team alive fraction      7 own ammo
//   2 visible enemies (capped at 4)  8 standing on an objective
//   3 remembered enemies fraction    9 distance to the nearest objective
//   4 nearest visible enemy distance 10 free cells in the 7x7 neighbourhood
//   5 nearest remembered enemy dist. 11 free-cell share of the whole map
// Distances are scaled by weapon range (4) or the map diagonal (5, 9) and
// read 1 when there is nothing to measure.
Features scheduler_features(const arena::Observation& obs);

}  // namespace bta::scheduler
