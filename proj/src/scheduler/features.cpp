#include "bta/scheduler/features.hpp"

#include <algorithm>
#include <cmath>

namespace bta::scheduler {
namespace {

constexpr double kRange = 8.0;
constexpr double kMaxHealth = 100.0;
constexpr double kMaxAmmo = 100.0;
constexpr int kPatchRadius = 3;

double unit(double v) { return std::clamp(v, 0.0, 1.0); }

double ratio(int a, int b) { return b > 0 ? unit(static_cast<double>(a) / b) : 0.0; }

}  // namespace

Features scheduler_features(const arena::Observation& obs) {
    Features f{};
    f[0] = ratio(obs.team_alive, obs.team_size);
    f[1] = ratio(obs.enemy_alive, obs.enemy_size);
    f[2] = unit(static_cast<double>(obs.visible_enemies.size()) / 4.0);
    f[3] = ratio(static_cast<int>(obs.known_enemy_locations.size()), obs.enemy_size);

    double diagonal = 1.0;
    if (obs.map) {
        diagonal = std::hypot(obs.map->width(), obs.map->height());
    }
    f[4] = obs.visible_enemies.empty() ? 1.0 : unit(obs.visible_enemies.front().distance / kRange);
    double known = -1.0;
    for (const auto& k : obs.known_enemy_locations) {
        const double d = distance(obs.position, k.position);
        known = known < 0.0 ? d : std::min(known, d);
    }
    f[5] = known < 0.0 ? 1.0 : unit(known / diagonal);
    f[6] = unit(obs.health / kMaxHealth);
    f[7] = unit(obs.ammo / kMaxAmmo);
    f[8] = obs.on_objective ? 1.0 : 0.0;
    f[9] = obs.nearest_objective ? unit(distance(obs.position, *obs.nearest_objective) / diagonal) : 1.0;

    if (obs.map) {
        const auto& map = *obs.map;
        const auto c = arena::cell_of(obs.position);
        int free = 0;
        int total = 0;
        for (int dy = -kPatchRadius; dy <= kPatchRadius; ++dy) {
            for (int dx = -kPatchRadius; dx <= kPatchRadius; ++dx) {
                const arena::Cell n{c.x + dx, c.y + dy};
                ++total;
                if (map.in_bounds(n) && !map.blocked(n)) {
                    ++free;
                }
            }
        }
        f[10] = ratio(free, total);
        f[11] = unit(static_cast<double>(map.free_cell_count()) / (static_cast<double>(map.width()) * map.height()));
    }
    return f;
}

}  // namespace bta::scheduler
