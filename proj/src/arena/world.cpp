#include "bta/arena/world.hpp"

#include "bta/core/error.hpp"

namespace bta::arena {

std::string to_string(const Action& a) {
    switch (a.verb) {
        case Verb::Wait: return "wait";
        case Verb::Move: return "move(" + std::to_string(a.direction) + ")";
        case Verb::Aim: return "aim(" + std::to_string(a.target) + ")";
        case Verb::Fire: return "fire";
    }
    return "?";
}

namespace {

Vec2 team_centroid(const MapSpec& map, int team) {
    Vec2 sum;
    const auto& spawns = map.spawns(team);
    for (const auto& s : spawns) {
        sum = sum + cell_center(s);
    }
    return sum * (1.0 / static_cast<double>(spawns.size()));
}

}  // namespace

World make_world(std::shared_ptr<const MapSpec> map, std::array<int, kTeamCount> team_sizes, const CombatRules& rules,
                 Rng& rng) {
    if (!map) {
        throw Error("bad-map", "world needs a map");
    }
    World world;
    world.map = std::move(map);
    world.rules = rules;
    world.team_sizes = team_sizes;
    int id = 0;
    for (int team = 0; team < kTeamCount; ++team) {
        const auto& spawns = world.map->spawns(team);
        const std::size_t offset = uniform_index(rng, spawns.size());
        const Vec2 enemy_centre = team_centroid(*world.map, 1 - team);
        for (int k = 0; k < team_sizes[static_cast<std::size_t>(team)]; ++k) {
            AgentState a;
            a.id = id++;
            a.team = team;
            a.position = cell_center(spawns[(offset + static_cast<std::size_t>(k)) % spawns.size()]);
            a.facing = (enemy_centre - a.position).normalized();
            a.health = rules.max_health;
            a.ammo = rules.start_ammo;
            a.alive = true;
            a.lives = 1;
            world.agents.push_back(a);
        }
    }
    // spawn intel: everyone starts knowing where the enemy spawned
    world.memory.resize(world.agents.size());
    for (const auto& viewer : world.agents) {
        for (const auto& other : world.agents) {
            if (other.team != viewer.team) {
                world.memory[static_cast<std::size_t>(viewer.id)][other.id] = other.position;
            }
        }
    }
    return world;
}

bool can_see(const World& world, const AgentState& viewer, Vec2 target) {
    return distance(viewer.position, target) <= world.rules.range && line_of_sight(*world.map, viewer.position, target);
}

World mirrored(const World& world) {
    World out = world;
    out.map = std::make_shared<const MapSpec>(world.map->mirrored_x());
    const double w = world.map->width();
    for (auto& a : out.agents) {
        a.position.x = w - a.position.x;
        a.facing.x = -a.facing.x;
    }
    for (auto& mem : out.memory) {
        for (auto& [id, pos] : mem) {
            pos.x = w - pos.x;
        }
    }
    return out;
}

}  // namespace bta::arena
