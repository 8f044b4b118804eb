#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bta/arena/map.hpp"
#include "bta/arena/world.hpp"
#include "bta/dsl/ast.hpp"

namespace bta::fps {

// A match setup: team 0 plays the policy under test, team 1 is driven by
// `opponent` (rule bindings) or stands idle when no opponent tree is given.
struct Scenario {
    std::string name;
    std::shared_ptr<const arena::MapSpec> map;
    std::array<int, arena::kTeamCount> team_sizes{1, 1};
    arena::CombatRules rules;
    int max_ticks = 600;
    std::optional<dsl::BtNode> opponent;
};

// Map texts shipped with the library (also under data/maps).
const std::string& kill_range_map_text();
const std::string& team_map_text();
const std::string& open_field_map_text();
const std::string& corridor_map_text();

// One shooter against three idle, respawning targets.
Scenario kill_range_scenario();
// Three against three with a contested objective; the opponents play the
// listing-style aggressive tree.
Scenario team_scenario();
// Scheduler suite: distant idle targets on open ground, and a corridor
// covered by two turrets that shoot on sight.
std::vector<Scenario> scheduler_suite();

// Well-known trees used as opponents, seeds and references.
const std::string& aggressive_tree_text();  // shoot on sight, else hunt
const std::string& turret_tree_text();      // shoot on sight, else hold
const std::string& camper_tree_text();      // shoot on sight, else wait

}  // namespace bta::fps
