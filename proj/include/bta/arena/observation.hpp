#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bta/arena/map.hpp"
#include "bta/core/vec2.hpp"

namespace bta::arena {

struct SeenAgent {
    int id = -1;
    int team = 0;
    Vec2 position;
    double distance = 0.0;
    int health = 0;
};

struct KnownLocation {
    int enemy_id = -1;
    Vec2 position;
};

// Egocentric view of one agent: the subset of world state it may act on.
struct Observation {
    int tick = 0;
    int agent_id = -1;
    int team = 0;
    Vec2 position;
    Vec2 facing{1.0, 0.0};
    int health = 0;
    int ammo = 0;
    bool alive = false;
    int aim_target = -1;

    std::vector<SeenAgent> visible_enemies;  // nearest first, then by id
    std::vector<KnownLocation> known_enemy_locations;  // by enemy id
    std::vector<SeenAgent> teammates;  // living teammates, nearest first
    std::vector<int> fallen_enemies;   // enemies currently dead (kill feed)
    int team_alive = 0;
    int team_size = 0;
    int enemy_alive = 0;
    int enemy_size = 0;

    bool on_objective = false;
    std::optional<Vec2> nearest_objective;
    Vec2 home;  // own team's first spawn cell centre

    std::shared_ptr<const MapSpec> map;

    // Boolean facts backing catalog conditions (has_enemy_in_view, ...).
    std::map<std::string, bool> facts;

    // Throws bta::Error("unknown-fact") for keys the arena does not publish.
    bool fact(const std::string& key) const;
};

}  // namespace bta::arena
