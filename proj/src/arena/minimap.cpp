#include "bta/arena/minimap.hpp"

#include <sstream>

#include "bta/core/error.hpp"

namespace bta::arena {

namespace {

std::vector<std::string> base_grid(const MapSpec& map) {
    std::vector<std::string> grid(static_cast<std::size_t>(map.height()), std::string(map.width(), '.'));
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            char& c = grid[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
            if (map.blocked({x, y})) {
                c = '#';
            } else if (map.is_objective({x, y})) {
                c = 'O';
            }
        }
    }
    return grid;
}

std::string describe(const Event& e) {
    const auto who = "agent " + std::to_string(e.actor);
    switch (e.kind) {
        case EventKind::Shot: return who + " fired";
        case EventKind::Hit: return who + " hit agent " + std::to_string(e.target);
        case EventKind::Kill:
            return e.actor >= 0 ? who + " killed agent " + std::to_string(e.target)
                                : "agent " + std::to_string(e.target) + " died";
        case EventKind::Respawn: return who + " respawned";
        case EventKind::Warning: return who + " warning: " + e.message;
    }
    return {};
}

}  // namespace

std::vector<MinimapFrame> minimap_frames(const ReplayTrace& trace, int stride) {
    if (stride < 1) {
        throw Error("bad-stride", "stride must be at least 1");
    }
    std::vector<MinimapFrame> frames;
    if (trace.frames.empty()) {
        return frames;
    }
    const auto base = base_grid(*trace.map);
    for (std::size_t i = 0; i < trace.frames.size(); i += static_cast<std::size_t>(stride)) {
        const auto& f = trace.frames[i];
        MinimapFrame mf;
        mf.tick = f.tick;
        mf.grid = base;
        for (const auto& a : f.agents) {
            if (!a.alive) {
                continue;
            }
            const Cell c = cell_of(a.position);
            char& slot = mf.grid[static_cast<std::size_t>(c.y)][static_cast<std::size_t>(c.x)];
            const char mark = a.team == 0 ? 'A' : 'B';
            slot = (slot == 'A' || slot == 'B' || slot == '*') && slot != mark ? '*' : mark;
        }
        for (const auto& e : f.events) {
            if (e.kind != EventKind::Shot) {
                mf.annotations.push_back(describe(e));
            }
        }
        frames.push_back(std::move(mf));
    }
    return frames;
}

std::string render_ascii(const std::vector<MinimapFrame>& frames) {
    std::ostringstream out;
    for (const auto& f : frames) {
        out << "tick " << f.tick << "\n";
        for (const auto& row : f.grid) {
            out << row << "\n";
        }
        for (const auto& a : f.annotations) {
            out << "  " << a << "\n";
        }
        out << "\n";
    }
    return out.str();
}

std::string render_svg(const MinimapFrame& frame, int cell_px) {
    const int h = static_cast<int>(frame.grid.size());
    const int w = h == 0 ? 0 : static_cast<int>(frame.grid.front().size());
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w * cell_px << "\" height=\"" << h * cell_px
        << "\">\n";
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const char c = frame.grid[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
            const char* fill = nullptr;
            switch (c) {
                case '#': fill = "#444444"; break;
                case 'O': fill = "#e0c040"; break;
                case 'A': fill = "#3070d0"; break;
                case 'B': fill = "#d04030"; break;
                case '*': fill = "#a040a0"; break;
                default: fill = "#f4f4f4"; break;
            }
            out << "<rect x=\"" << x * cell_px << "\" y=\"" << y * cell_px << "\" width=\"" << cell_px
                << "\" height=\"" << cell_px << "\" fill=\"" << fill << "\"/>\n";
        }
    }
    out << "<text x=\"2\" y=\"" << cell_px << "\" font-size=\"" << cell_px << "\">tick " << frame.tick << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace bta::arena
