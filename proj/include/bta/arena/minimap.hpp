#pragma once

#include <string>
#include <vector>

#include "bta/arena/replay.hpp"

namespace bta::arena {

// Symbolic top-down view: '#' obstacle, '.' floor, 'O' objective, 'A'/'B'
// living agents of each team, '*' both teams in one cell.
struct MinimapFrame {
    int tick = 0;
    std::vector<std::string> grid;
    std::vector<std::string> annotations;
};

std::vector<MinimapFrame> minimap_frames(const ReplayTrace& trace, int stride);

std::string render_ascii(const std::vector<MinimapFrame>& frames);
std::string render_svg(const MinimapFrame& frame, int cell_px = 12);

}  // namespace bta::arena
