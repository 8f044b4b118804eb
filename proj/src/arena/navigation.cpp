#include "bta/arena/navigation.hpp"

#include <cmath>
#include <deque>

namespace bta::arena {

int mirror_direction(int dir) {
    static constexpr std::array<int, kDirectionCount> kMirror = {4, 3, 2, 1, 0, 7, 6, 5};
    return kMirror.at(static_cast<std::size_t>(dir));
}

Vec2 direction_vector(int dir) {
    const auto s = kDirections.at(static_cast<std::size_t>(dir));
    return {static_cast<double>(s.dx), static_cast<double>(s.dy)};
}

std::optional<Vec2> try_move(const MapSpec& map, Vec2 from, int dir) {
    if (dir < 0 || dir >= kDirectionCount) {
        return std::nullopt;
    }
    const auto s = kDirections[static_cast<std::size_t>(dir)];
    const Vec2 to{from.x + kMoveStep * s.dx, from.y + kMoveStep * s.dy};
    const Cell a = cell_of(from);
    const Cell b = cell_of(to);
    if (map.blocked(b)) {
        return std::nullopt;
    }
    if (a.x != b.x && a.y != b.y && (map.blocked({b.x, a.y}) || map.blocked({a.x, b.y}))) {
        return std::nullopt;
    }
    return to;
}

DistanceField::DistanceField(const MapSpec& map, Vec2 goal, double radius)
    : lw_(map.width() * 2), lh_(map.height() * 2), dist_(static_cast<std::size_t>(lw_ * lh_), -1) {
    std::deque<int> frontier;
    for (int ly = 0; ly < lh_; ++ly) {
        for (int lx = 0; lx < lw_; ++lx) {
            const Vec2 p{lx * 0.5, ly * 0.5};
            if (!map.blocked(cell_of(p)) && distance(p, goal) <= radius + 1e-9) {
                dist_[static_cast<std::size_t>(ly * lw_ + lx)] = 0;
                frontier.push_back(ly * lw_ + lx);
            }
        }
    }
    // legality is symmetric, so a forward BFS from the goal set yields
    // distances *to* the goal
    while (!frontier.empty()) {
        const int cur = frontier.front();
        frontier.pop_front();
        const Vec2 p{(cur % lw_) * 0.5, (cur / lw_) * 0.5};
        for (int d = 0; d < kDirectionCount; ++d) {
            const auto next = try_move(map, p, d);
            if (!next) {
                continue;
            }
            const int ni = index(*next);
            if (ni >= 0 && dist_[static_cast<std::size_t>(ni)] < 0) {
                dist_[static_cast<std::size_t>(ni)] = dist_[static_cast<std::size_t>(cur)] + 1;
                frontier.push_back(ni);
            }
        }
    }
}

int DistanceField::index(Vec2 p) const {
    const double fx = p.x * 2.0;
    const double fy = p.y * 2.0;
    const double rx = std::round(fx);
    const double ry = std::round(fy);
    if (std::abs(fx - rx) > 1e-9 || std::abs(fy - ry) > 1e-9) {
        return -1;
    }
    const int lx = static_cast<int>(rx);
    const int ly = static_cast<int>(ry);
    if (lx < 0 || ly < 0 || lx >= lw_ || ly >= lh_) {
        return -1;
    }
    return ly * lw_ + lx;
}

int DistanceField::at(Vec2 p) const {
    const int i = index(p);
    return i < 0 ? -1 : dist_[static_cast<std::size_t>(i)];
}

int DistanceField::best_direction(const MapSpec& map, Vec2 p) const {
    const int here = at(p);
    if (here <= 0) {
        return -1;
    }
    for (int d = 0; d < kDirectionCount; ++d) {
        const auto next = try_move(map, p, d);
        if (next && at(*next) == here - 1) {
            return d;
        }
    }
    return -1;
}

}  // namespace bta::arena
