#pragma once

#include <array>
#include <optional>
#include <vector>

#include "bta/arena/map.hpp"
#include "bta/core/vec2.hpp"

namespace bta::arena {

inline constexpr int kDirectionCount = 8;
inline constexpr double kMoveStep = 0.5;

struct Step {
    int dx;
    int dy;
};

// Index order: E, NE, N, NW, W, SW, S, SE (y grows downwards, so N is -y).
inline constexpr std::array<Step, kDirectionCount> kDirections = {
    Step{1, 0}, Step{1, -1}, Step{0, -1}, Step{-1, -1}, Step{-1, 0}, Step{-1, 1}, Step{0, 1}, Step{1, 1}};

// Direction index under the reflection x -> -x.
int mirror_direction(int dir);
Vec2 direction_vector(int dir);

// Moves advance kMoveStep along each non-zero axis, so positions stay on the
// half-cell lattice. A move is legal when the destination cell is floor and,
// for moves that change both cell coordinates, both side cells are floor too.
std::optional<Vec2> try_move(const MapSpec& map, Vec2 from, int dir);

// Exact minimum number of move ticks from every lattice point to the set of
// lattice points within `radius` of `goal`.
class DistanceField {
public:
    DistanceField(const MapSpec& map, Vec2 goal, double radius = 0.5);

    // -1 when unreachable or off-lattice.
    int at(Vec2 p) const;
    // Direction that decreases the distance by one (lowest index on ties), or -1.
    int best_direction(const MapSpec& map, Vec2 p) const;

    int lattice_width() const { return lw_; }
    int lattice_height() const { return lh_; }

private:
    int index(Vec2 p) const;

    int lw_;
    int lh_;
    std::vector<int> dist_;
};

}  // namespace bta::arena
