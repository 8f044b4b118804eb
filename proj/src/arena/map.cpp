#include "bta/arena/map.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "bta/core/error.hpp"
#include "bta/core/hash.hpp"

namespace bta::arena {

MapSpec::MapSpec(std::string name, int width, int height, std::vector<std::uint8_t> obstacles,
                 std::array<std::vector<Cell>, kTeamCount> spawns, std::vector<Cell> objectives)
    : name_(std::move(name)),
      width_(width),
      height_(height),
      obstacles_(std::move(obstacles)),
      spawns_(std::move(spawns)),
      objectives_(std::move(objectives)) {
    if (width_ < kMinMapSize || width_ > kMaxMapSize || height_ < kMinMapSize || height_ > kMaxMapSize) {
        throw Error("bad-map", "map dimensions must lie in [" + std::to_string(kMinMapSize) + ", " +
                                   std::to_string(kMaxMapSize) + "]");
    }
    if (obstacles_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
        throw Error("bad-map", "obstacle grid size does not match dimensions");
    }
    for (int team = 0; team < kTeamCount; ++team) {
        if (spawns_[static_cast<std::size_t>(team)].empty()) {
            throw Error("bad-map", "team " + std::string(1, static_cast<char>('A' + team)) + " has no spawn point");
        }
        for (const auto& s : spawns_[static_cast<std::size_t>(team)]) {
            if (!in_bounds(s) || blocked(s)) {
                throw Error("bad-map", "spawn point must be an in-bounds floor cell");
            }
        }
    }
    for (const auto& o : objectives_) {
        if (!in_bounds(o) || blocked(o)) {
            throw Error("bad-map", "objective must be an in-bounds floor cell");
        }
    }
    std::sort(objectives_.begin(), objectives_.end());
}

bool MapSpec::blocked(Cell c) const {
    if (!in_bounds(c)) {
        return true;
    }
    return obstacles_[static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
                      static_cast<std::size_t>(c.x)] != 0;
}

bool MapSpec::is_objective(Cell c) const {
    return std::binary_search(objectives_.begin(), objectives_.end(), c);
}

std::size_t MapSpec::free_cell_count() const {
    return static_cast<std::size_t>(std::count(obstacles_.begin(), obstacles_.end(), 0));
}

std::uint64_t MapSpec::hash() const {
    return fnv1a64(to_text());
}

std::string MapSpec::to_text() const {
    std::vector<std::string> rows(static_cast<std::size_t>(height_), std::string(static_cast<std::size_t>(width_), '.'));
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            if (blocked({x, y})) {
                rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] = '#';
            }
        }
    }
    for (const auto& o : objectives_) {
        rows[static_cast<std::size_t>(o.y)][static_cast<std::size_t>(o.x)] = 'O';
    }
    for (int team = 0; team < kTeamCount; ++team) {
        for (const auto& s : spawns_[static_cast<std::size_t>(team)]) {
            rows[static_cast<std::size_t>(s.y)][static_cast<std::size_t>(s.x)] = static_cast<char>('A' + team);
        }
    }
    std::string out = std::to_string(width_) + " " + std::to_string(height_) + " " + name_ + "\n";
    for (const auto& r : rows) {
        out += r + "\n";
    }
    return out;
}

MapSpec MapSpec::mirrored_x() const {
    std::vector<std::uint8_t> obstacles(obstacles_.size());
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            obstacles[static_cast<std::size_t>(y * width_ + x)] = blocked({width_ - 1 - x, y}) ? 1 : 0;
        }
    }
    auto flip = [this](std::vector<Cell> cells) {
        for (auto& c : cells) {
            c.x = width_ - 1 - c.x;
        }
        return cells;
    };
    return MapSpec(name_ + "_mirrored", width_, height_, std::move(obstacles), {flip(spawns_[0]), flip(spawns_[1])},
                   flip(objectives_));
}

MapSpec MapSpec::parse(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header)) {
        throw Error("bad-map", "missing header line 'W H name'");
    }
    std::istringstream hs(header);
    int w = 0;
    int h = 0;
    std::string name;
    if (!(hs >> w >> h >> name)) {
        throw Error("bad-map", "header must be 'W H name'");
    }
    if (w < kMinMapSize || w > kMaxMapSize || h < kMinMapSize || h > kMaxMapSize) {
        throw Error("bad-map", "map dimensions must lie in [" + std::to_string(kMinMapSize) + ", " +
                                   std::to_string(kMaxMapSize) + "]");
    }
    std::vector<std::uint8_t> obstacles(static_cast<std::size_t>(w * h), 0);
    std::array<std::vector<Cell>, kTeamCount> spawns;
    std::vector<Cell> objectives;
    for (int y = 0; y < h; ++y) {
        std::string row;
        if (!std::getline(in, row)) {
            throw Error("bad-map", "expected " + std::to_string(h) + " rows, got " + std::to_string(y));
        }
        if (!row.empty() && row.back() == '\r') {
            row.pop_back();
        }
        if (static_cast<int>(row.size()) != w) {
            throw Error("bad-map", "row " + std::to_string(y + 1) + " has length " + std::to_string(row.size()) +
                                       ", expected " + std::to_string(w));
        }
        for (int x = 0; x < w; ++x) {
            switch (row[static_cast<std::size_t>(x)]) {
                case '#': obstacles[static_cast<std::size_t>(y * w + x)] = 1; break;
                case '.': break;
                case 'A': spawns[0].push_back({x, y}); break;
                case 'B': spawns[1].push_back({x, y}); break;
                case 'O': objectives.push_back({x, y}); break;
                default:
                    throw Error("bad-map", std::string("unexpected character '") + row[static_cast<std::size_t>(x)] +
                                               "' at row " + std::to_string(y + 1));
            }
        }
    }
    return MapSpec(name, w, h, std::move(obstacles), std::move(spawns), std::move(objectives));
}

MapSpec MapSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("io", "cannot open map '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

bool line_of_sight(const MapSpec& map, Vec2 a, Vec2 b) {
    const double min_x = std::min(a.x, b.x);
    const double max_x = std::max(a.x, b.x);
    const double min_y = std::min(a.y, b.y);
    const double max_y = std::max(a.y, b.y);
    // normal of the segment; n.(p - a) has the same magnitude from either endpoint
    const double nx = -(b.y - a.y);
    const double ny = b.x - a.x;
    const int x0 = static_cast<int>(std::floor(min_x));
    const int x1 = static_cast<int>(std::floor(max_x));
    const int y0 = static_cast<int>(std::floor(min_y));
    const int y1 = static_cast<int>(std::floor(max_y));
    for (int cy = y0; cy <= y1; ++cy) {
        for (int cx = x0; cx <= x1; ++cx) {
            if (!map.blocked({cx, cy})) {
                continue;
            }
            // separating axes: x, y and the segment normal; touching is not crossing
            if (!(max_x > cx && min_x < cx + 1 && max_y > cy && min_y < cy + 1)) {
                continue;
            }
            const double s0 = nx * (cx - a.x) + ny * (cy - a.y);
            const double s1 = nx * (cx + 1 - a.x) + ny * (cy - a.y);
            const double s2 = nx * (cx - a.x) + ny * (cy + 1 - a.y);
            const double s3 = nx * (cx + 1 - a.x) + ny * (cy + 1 - a.y);
            const bool all_nonneg = s0 >= 0 && s1 >= 0 && s2 >= 0 && s3 >= 0;
            const bool all_nonpos = s0 <= 0 && s1 <= 0 && s2 <= 0 && s3 <= 0;
            if (!all_nonneg && !all_nonpos) {
                return false;
            }
        }
    }
    return true;
}

MapSpec random_wall_map(int width, int height, int walls, Rng& rng, std::string name) {
    std::vector<std::uint8_t> grid(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
    for (int i = 0; i < walls; ++i) {
        const int len = 3 + static_cast<int>(uniform_index(rng, 5));
        const bool horizontal = bernoulli(rng, 0.5);
        const int x0 = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(width)));
        const int y0 = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(height)));
        for (int k = 0; k < len; ++k) {
            const int x = horizontal ? x0 + k : x0;
            const int y = horizontal ? y0 : y0 + k;
            if (x < width && y < height) {
                grid[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] = 1;
            }
        }
    }
    std::array<std::vector<Cell>, kTeamCount> spawns;
    for (auto& s : spawns) {
        for (;;) {
            const Cell c{static_cast<int>(uniform_index(rng, static_cast<std::size_t>(width))),
                         static_cast<int>(uniform_index(rng, static_cast<std::size_t>(height)))};
            if (grid[static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(c.x)] ==
                0) {
                s.push_back(c);
                break;
            }
        }
    }
    return MapSpec(std::move(name), width, height, std::move(grid), std::move(spawns));
}

}  // namespace bta::arena
