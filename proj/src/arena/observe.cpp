#include <algorithm>

#include "bta/arena/world.hpp"
#include "bta/core/error.hpp"

namespace bta::arena {

bool Observation::fact(const std::string& key) const {
    const auto it = facts.find(key);
    if (it == facts.end()) {
        throw Error("unknown-fact", "arena publishes no fact '" + key + "'");
    }
    return it->second;
}

namespace {

bool nearer(const SeenAgent& a, const SeenAgent& b) {
    if (a.distance != b.distance) {
        return a.distance < b.distance;
    }
    return a.id < b.id;
}

}  // namespace

Observation observe(const World& world, int agent_id) {
    if (agent_id < 0 || agent_id >= static_cast<int>(world.agents.size())) {
        throw Error("no-such-agent", "no agent with id " + std::to_string(agent_id));
    }
    const auto& self = world.agents[static_cast<std::size_t>(agent_id)];
    const auto& rules = world.rules;
    Observation obs;
    obs.tick = world.tick;
    obs.agent_id = self.id;
    obs.team = self.team;
    obs.position = self.position;
    obs.facing = self.facing;
    obs.health = self.health;
    obs.ammo = self.ammo;
    obs.alive = self.alive;
    obs.aim_target = self.aim_target;
    obs.map = world.map;
    obs.team_size = world.team_sizes[static_cast<std::size_t>(self.team)];
    obs.enemy_size = world.team_sizes[static_cast<std::size_t>(1 - self.team)];

    for (const auto& other : world.agents) {
        if (other.id == self.id) {
            if (other.alive) {
                ++obs.team_alive;
            }
            continue;
        }
        const SeenAgent seen{other.id, other.team, other.position, distance(self.position, other.position),
                             other.health};
        if (other.team == self.team) {
            if (other.alive) {
                ++obs.team_alive;
                obs.teammates.push_back(seen);
            }
            continue;
        }
        if (!other.alive) {
            obs.fallen_enemies.push_back(other.id);
        } else {
            ++obs.enemy_alive;
            if (self.alive && can_see(world, self, other.position)) {
                obs.visible_enemies.push_back(seen);
            }
        }
    }
    std::sort(obs.visible_enemies.begin(), obs.visible_enemies.end(), nearer);
    std::sort(obs.teammates.begin(), obs.teammates.end(), nearer);

    for (const auto& [id, pos] : world.memory[static_cast<std::size_t>(self.id)]) {
        obs.known_enemy_locations.push_back({id, pos});
    }

    obs.on_objective = world.map->is_objective(cell_of(self.position));
    double best = 0.0;
    for (const auto& c : world.map->objectives()) {
        const double d = distance(self.position, cell_center(c));
        if (!obs.nearest_objective || d < best) {
            obs.nearest_objective = cell_center(c);
            best = d;
        }
    }
    obs.home = cell_center(world.map->spawns(self.team).front());

    const bool teammate_near = std::any_of(obs.teammates.begin(), obs.teammates.end(),
                                           [&](const SeenAgent& t) { return t.distance <= rules.teammate_radius; });
    const bool aimed = std::any_of(obs.visible_enemies.begin(), obs.visible_enemies.end(),
                                   [&](const SeenAgent& e) { return e.id == self.aim_target; });
    int near_allies = 1;
    for (const auto& t : obs.teammates) {
        if (t.distance <= rules.teammate_radius) {
            ++near_allies;
        }
    }

    obs.facts["has_enemy_in_view"] = !obs.visible_enemies.empty();
    obs.facts["has_known_enemy_location"] = !obs.known_enemy_locations.empty();
    obs.facts["is_low_health"] = self.health <= rules.low_health;
    obs.facts["is_out_of_ammo"] = self.ammo <= 0;
    obs.facts["is_on_objective"] = obs.on_objective;
    obs.facts["has_objective"] = obs.nearest_objective.has_value();
    obs.facts["has_teammate_nearby"] = teammate_near;
    obs.facts["enemy_in_close_range"] =
        !obs.visible_enemies.empty() && obs.visible_enemies.front().distance <= rules.close_range;
    obs.facts["is_aimed_at_enemy"] = aimed;
    obs.facts["is_outnumbered"] = static_cast<int>(obs.visible_enemies.size()) > near_allies;
    return obs;
}

}  // namespace bta::arena
