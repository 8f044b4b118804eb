#pragma once

#include <string>

#include "bta/arena/replay.hpp"

namespace bta::cli {

// Every stride-th frame as text, separated by blank lines.
std::string ascii_frames(const arena::ReplayTrace& trace, int stride);

// Writes frame_<tick>.svg files into `dir` (created when missing) and
// returns how many were written.
int write_svg_frames(const arena::ReplayTrace& trace, const std::string& dir, int stride);

}  // namespace bta::cli
