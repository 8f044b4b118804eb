#include "bta/arena/navigation.hpp"
#include "bta/arena/world.hpp"
#include "bta/core/error.hpp"

namespace bta::arena {

namespace {

void respawn(World& world, AgentState& a, std::vector<Event>& events) {
    const auto& spawns = world.map->spawns(a.team);
    a.position = cell_center(spawns[static_cast<std::size_t>(a.id + a.lives) % spawns.size()]);
    a.alive = true;
    a.health = world.rules.max_health;
    a.ammo = world.rules.start_ammo;
    a.aim_target = -1;
    a.respawn_timer = 0;
    ++a.lives;
    events.push_back({world.tick, EventKind::Respawn, a.id, -1, {}});
    for (const auto& other : world.agents) {
        if (other.team != a.team) {
            world.memory[static_cast<std::size_t>(other.id)][a.id] = a.position;
        }
    }
}

void update_memory(World& world) {
    for (const auto& viewer : world.agents) {
        if (!viewer.alive) {
            continue;
        }
        auto& mem = world.memory[static_cast<std::size_t>(viewer.id)];
        for (const auto& enemy : world.agents) {
            if (enemy.team == viewer.team) {
                continue;
            }
            if (enemy.alive && can_see(world, viewer, enemy.position)) {
                mem[enemy.id] = enemy.position;
                continue;
            }
            const auto it = mem.find(enemy.id);
            if (it != mem.end() && can_see(world, viewer, it->second)) {
                mem.erase(it);
            }
        }
    }
}

}  // namespace

std::vector<Event> step(World& world, std::span<const Action> joint_actions, Rng& rng) {
    if (joint_actions.size() != world.agents.size()) {
        throw Error("bad-joint-action", "expected one action per agent");
    }
    std::vector<Event> events;
    const int tick = world.tick;
    auto warn = [&](int actor, std::string msg) {
        events.push_back({tick, EventKind::Warning, actor, -1, std::move(msg)});
    };

    std::vector<bool> acting(world.agents.size(), false);
    for (auto& a : world.agents) {
        const auto& act = joint_actions[static_cast<std::size_t>(a.id)];
        if (!a.alive) {
            if (act.verb != Verb::Wait) {
                warn(a.id, "action from dead agent ignored");
            }
            continue;
        }
        acting[static_cast<std::size_t>(a.id)] = true;
    }

    for (auto& a : world.agents) {
        if (!a.alive && world.rules.respawn && --a.respawn_timer <= 0) {
            respawn(world, a, events);
        }
    }

    for (auto& a : world.agents) {
        const auto& act = joint_actions[static_cast<std::size_t>(a.id)];
        if (!acting[static_cast<std::size_t>(a.id)] || act.verb != Verb::Aim) {
            continue;
        }
        const bool valid = act.target >= 0 && act.target < static_cast<int>(world.agents.size());
        const AgentState* target = valid ? &world.agents[static_cast<std::size_t>(act.target)] : nullptr;
        if (target == nullptr || target->team == a.team || !target->alive || !can_see(world, a, target->position)) {
            warn(a.id, "aim at invalid or unseen target " + std::to_string(act.target));
            continue;
        }
        a.aim_target = target->id;
        a.facing = (target->position - a.position).normalized();
    }

    for (auto& a : world.agents) {
        const auto& act = joint_actions[static_cast<std::size_t>(a.id)];
        if (!acting[static_cast<std::size_t>(a.id)] || act.verb != Verb::Move) {
            continue;
        }
        if (const auto next = try_move(*world.map, a.position, act.direction)) {
            a.position = *next;
            a.facing = direction_vector(act.direction).normalized();
            a.aim_target = -1;
        }
    }

    // fire resolves simultaneously against the post-move positions
    struct Hit {
        int shooter;
        int target;
    };
    std::vector<Hit> hits;
    for (auto& a : world.agents) {
        const auto& act = joint_actions[static_cast<std::size_t>(a.id)];
        if (!acting[static_cast<std::size_t>(a.id)] || act.verb != Verb::Fire) {
            continue;
        }
        if (a.ammo <= 0) {
            warn(a.id, "fire with no ammo");
            continue;
        }
        --a.ammo;
        events.push_back({tick, EventKind::Shot, a.id, a.aim_target, {}});
        for (const auto& other : world.agents) {
            if (other.team != a.team && distance(other.position, a.position) <= world.rules.hearing_range) {
                world.memory[static_cast<std::size_t>(other.id)][a.id] = a.position;
            }
        }
        if (a.aim_target < 0) {
            continue;
        }
        const auto& target = world.agents[static_cast<std::size_t>(a.aim_target)];
        if (!target.alive || !can_see(world, a, target.position)) {
            continue;
        }
        if (world.rules.aim_noise) {
            const double ox = 2.0 * uniform01(rng) - 1.0;
            const double oy = 2.0 * uniform01(rng) - 1.0;
            if (std::abs(ox) > 0.5 || std::abs(oy) > 0.5) {
                continue;
            }
        }
        hits.push_back({a.id, target.id});
    }

    std::vector<int> killer(world.agents.size(), -1);
    for (const auto& h : hits) {
        auto& victim = world.agents[static_cast<std::size_t>(h.target)];
        victim.health -= world.rules.damage;
        events.push_back({tick, EventKind::Hit, h.shooter, h.target, {}});
        world.memory[static_cast<std::size_t>(h.target)][h.shooter] =
            world.agents[static_cast<std::size_t>(h.shooter)].position;
        if (victim.health <= 0 && killer[static_cast<std::size_t>(h.target)] < 0) {
            killer[static_cast<std::size_t>(h.target)] = h.shooter;
        }
    }
    for (auto& a : world.agents) {
        if (!a.alive || a.health > 0) {
            continue;
        }
        a.alive = false;
        a.health = 0;
        a.aim_target = -1;
        a.respawn_timer = world.rules.respawn_ticks;
        events.push_back({tick, EventKind::Kill, killer[static_cast<std::size_t>(a.id)], a.id, {}});
        for (auto& other : world.agents) {
            if (other.aim_target == a.id) {
                other.aim_target = -1;
            }
        }
    }

    update_memory(world);
    ++world.tick;
    return events;
}

}  // namespace bta::arena
