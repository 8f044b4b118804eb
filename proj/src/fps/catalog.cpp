#include "bta/fps/catalog.hpp"

namespace bta::fps {

dsl::NodeCatalog shooter_catalog() {
    std::vector<dsl::ConditionSpec> conditions = {
        {"has_enemy_in_view", "An enemy is within weapon range with a clear line of sight."},
        {"has_known_enemy_location", "At least one enemy position is remembered from sightings, gunfire or hits."},
        {"is_low_health", "Own health is at or below half."},
        {"is_out_of_ammo", "No ammunition left."},
        {"is_on_objective", "Standing on an objective cell."},
        {"has_objective", "The map has objective cells."},
        {"has_teammate_nearby", "A living teammate is within 4 cells."},
        {"enemy_in_close_range", "The nearest visible enemy is within 3 cells."},
        {"is_aimed_at_enemy", "Currently aiming at a visible enemy."},
        {"is_outnumbered", "More enemies in view than allies nearby (self included)."},
    };
    std::vector<dsl::ActionSpec> actions = {
        {"shoot",
         "Aim at and fire on one visible enemy until it dies or stays out of sight for 5 ticks.",
         {{"random_enemy_in_view", "Pick any visible enemy."},
          {"nearest_enemy_in_view", "Pick the closest visible enemy."},
          {"weakest_enemy_in_view", "Pick the visible enemy with the least health."}},
         true,
         {"has_enemy_in_view"}},
        {"move_to",
         "Walk to a destination; succeeds on arrival and fails if the destination is unknown.",
         {{"random_enemy_location", "A remembered enemy position, chosen at random."},
          {"nearest_enemy_location", "The closest remembered enemy position."},
          {"objective", "The closest objective cell."},
          {"home", "The team's spawn area."},
          {"teammate", "The closest living teammate."}},
         true,
         {"has_known_enemy_location", "has_objective"}},
        {"retreat", "Step away from the closest known threat while enemies remain in view.", {}, false,
         {"is_low_health", "is_outnumbered"}},
        {"patrol", "Wander between random reachable cells.", {}, false, {}},
        {"wait", "Stand still for this tick.", {}, false, {}},
    };
    return dsl::NodeCatalog(std::move(conditions), std::move(actions));
}

}  // namespace bta::fps
