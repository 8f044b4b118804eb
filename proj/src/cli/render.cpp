#include "bta/cli/render.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bta/arena/minimap.hpp"
#include "bta/core/error.hpp"

namespace bta::cli {

std::string ascii_frames(const arena::ReplayTrace& trace, int stride) {
    return arena::render_ascii(arena::minimap_frames(trace, stride));
}

int write_svg_frames(const arena::ReplayTrace& trace, const std::string& dir, int stride) {
    const auto frames = arena::minimap_frames(trace, stride);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error("io", "cannot create " + dir);
    }
    for (const auto& f : frames) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%05d.svg", f.tick);
        const auto path = (std::filesystem::path(dir) / name).string();
        std::ofstream out(path, std::ios::binary);
        out << arena::render_svg(f);
        if (!out) {
            throw Error("io", "cannot write " + path);
        }
    }
    return static_cast<int>(frames.size());
}

}  // namespace bta::cli
