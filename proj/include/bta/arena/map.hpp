#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "bta/core/rng.hpp"
#include "bta/core/vec2.hpp"

namespace bta::arena {

inline constexpr int kTeamCount = 2;
inline constexpr int kMinMapSize = 8;
inline constexpr int kMaxMapSize = 128;

struct Cell {
    int x = 0;
    int y = 0;

    friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline Cell cell_of(Vec2 p) {
    return {static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y))};
}

inline Vec2 cell_center(Cell c) { return {c.x + 0.5, c.y + 0.5}; }

// Static layout of an arena. Text form:
//   W H name
//   <H rows of W characters: '#' obstacle, '.' floor, 'A'/'B' spawn, 'O' objective>
class MapSpec {
public:
    MapSpec(std::string name, int width, int height, std::vector<std::uint8_t> obstacles,
            std::array<std::vector<Cell>, kTeamCount> spawns, std::vector<Cell> objectives = {});

    const std::string& name() const { return name_; }
    int width() const { return width_; }
    int height() const { return height_; }

    bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
    // Out-of-bounds cells count as blocked.
    bool blocked(Cell c) const;
    bool is_objective(Cell c) const;
    const std::vector<Cell>& spawns(int team) const { return spawns_.at(static_cast<std::size_t>(team)); }
    const std::vector<Cell>& objectives() const { return objectives_; }
    std::size_t free_cell_count() const;

    std::uint64_t hash() const;
    std::string to_text() const;
    // Reflection x -> width - x; team spawns keep their teams.
    MapSpec mirrored_x() const;

    static MapSpec parse(const std::string& text);
    static MapSpec load(const std::string& path);

private:
    std::string name_;
    int width_;
    int height_;
    std::vector<std::uint8_t> obstacles_;
    std::array<std::vector<Cell>, kTeamCount> spawns_;
    std::vector<Cell> objectives_;
};

// True when the open segment a-b crosses no obstacle interior. Symmetric in
// its endpoints by construction.
bool line_of_sight(const MapSpec& map, Vec2 a, Vec2 b);

// Open floor with `walls` random straight wall segments (length 3-7) and one
// random spawn per team. Used for training and benchmark episodes.
MapSpec random_wall_map(int width, int height, int walls, Rng& rng, std::string name = "random");

}  // namespace bta::arena
