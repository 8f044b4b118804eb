#pragma once

#include <array>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bta/arena/action.hpp"
#include "bta/arena/map.hpp"
#include "bta/arena/observation.hpp"
#include "bta/core/rng.hpp"
#include "bta/core/vec2.hpp"

namespace bta::arena {

struct CombatRules {
    int max_health = 100;
    int damage = 25;
    double range = 8.0;
    int respawn_ticks = 50;
    int start_ammo = 100;
    bool respawn = true;
    bool aim_noise = false;       // seeded +-1 cell aim error when on
    double hearing_range = 16.0;  // gunfire reveals the shooter within this radius
    int low_health = 50;
    double close_range = 3.0;
    double teammate_radius = 4.0;

    friend bool operator==(const CombatRules&, const CombatRules&) = default;
};

struct AgentState {
    int id = -1;
    int team = 0;
    Vec2 position;
    Vec2 facing{1.0, 0.0};
    int health = 0;
    int ammo = 0;
    bool alive = true;
    int respawn_timer = 0;
    int aim_target = -1;
    int lives = 0;  // spawn counter, used to rotate spawn points
};

enum class EventKind { Shot, Hit, Kill, Respawn, Warning };

struct Event {
    int tick = 0;
    EventKind kind = EventKind::Warning;
    int actor = -1;
    int target = -1;
    std::string message;

    friend bool operator==(const Event&, const Event&) = default;
};

struct World {
    std::shared_ptr<const MapSpec> map;
    CombatRules rules;
    std::vector<AgentState> agents;
    std::array<int, kTeamCount> team_sizes{};
    int tick = 0;
    // Per agent: last-known enemy positions. Entries persist until the spot is
    // in view and the enemy is not there.
    std::vector<std::map<int, Vec2>> memory;
};

World make_world(std::shared_ptr<const MapSpec> map, std::array<int, kTeamCount> team_sizes, const CombatRules& rules,
                 Rng& rng);

bool can_see(const World& world, const AgentState& viewer, Vec2 target);

// Applies one joint action (indexed by agent id) and advances the tick.
// Deterministic given (world, actions, rng state).
std::vector<Event> step(World& world, std::span<const Action> joint_actions, Rng& rng);

// Throws bta::Error("no-such-agent").
Observation observe(const World& world, int agent_id);

// Reflects a world through x -> width - x (map, agents, memory).
World mirrored(const World& world);

}  // namespace bta::arena
