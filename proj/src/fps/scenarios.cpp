#include "bta/fps/scenarios.hpp"

#include "bta/dsl/parser.hpp"

namespace bta::fps {

const std::string& kill_range_map_text() {
    static const std::string text =
        "20 12 kill_range\n"
        "....................\n"
        "....................\n"
        "......#.......B.....\n"
        "......#.............\n"
        "......#.....##......\n"
        ".A..........##...B..\n"
        "....................\n"
        "......#.............\n"
        "......#.......B.....\n"
        "......#.............\n"
        "....................\n"
        "....................\n";
    return text;
}

const std::string& team_map_text() {
    static const std::string text =
        "24 16 team_arena\n"
        "........................\n"
        ".A.........##.........B.\n"
        "........................\n"
        "....##............##....\n"
        "....##............##....\n"
        "........................\n"
        ".A.........OO.........B.\n"
        "..........#OO#..........\n"
        "..........#OO#..........\n"
        ".A.........OO.........B.\n"
        "........................\n"
        "....##............##....\n"
        "....##............##....\n"
        "........................\n"
        "...........##...........\n"
        "........................\n";
    return text;
}

const std::string& open_field_map_text() {
    static const std::string text =
        "24 12 open_field\n"
        "........................\n"
        "........................\n"
        "..A.....................\n"
        "....................B...\n"
        "........................\n"
        "..A.....................\n"
        "........................\n"
        "....................B...\n"
        "........................\n"
        "........................\n"
        "........................\n"
        "........................\n";
    return text;
}

const std::string& corridor_map_text() {
    static const std::string text =
        "24 11 corridor\n"
        "########################\n"
        "##############.......###\n"
        "##############.....B.###\n"
        "##############.......###\n"
        "##############.......###\n"
        "..A....................#\n"
        "##############.......###\n"
        "##############.......###\n"
        "##############.....B.###\n"
        "##############.......###\n"
        "########################\n";
    return text;
}

const std::string& aggressive_tree_text() {
    static const std::string text =
        "selector:\n"
        "  sequence:\n"
        "    condition: has_enemy_in_view\n"
        "    task: shoot random_enemy_in_view\n"
        "  sequence:\n"
        "    condition: no\n"
        "    condition: has_enemy_in_view\n"
        "    task: move_to random_enemy_location\n";
    return text;
}

const std::string& turret_tree_text() {
    static const std::string text =
        "selector:\n"
        "  sequence:\n"
        "    condition: has_enemy_in_view\n"
        "    task: shoot nearest_enemy_in_view\n"
        "  task: wait\n";
    return text;
}

const std::string& camper_tree_text() {
    static const std::string text =
        "selector:\n"
        "  sequence:\n"
        "    condition: has_enemy_in_view\n"
        "    task: shoot nearest_enemy_in_view\n"
        "  sequence:\n"
        "    condition: is_low_health\n"
        "    task: retreat\n"
        "  task: wait\n";
    return text;
}

namespace {

std::shared_ptr<const arena::MapSpec> map_of(const std::string& text) {
    return std::make_shared<const arena::MapSpec>(arena::MapSpec::parse(text));
}

}  // namespace

Scenario kill_range_scenario() {
    Scenario s;
    s.name = "kill_range";
    s.map = map_of(kill_range_map_text());
    s.team_sizes = {1, 3};
    s.max_ticks = 600;
    return s;
}

Scenario team_scenario() {
    Scenario s;
    s.name = "team_arena";
    s.map = map_of(team_map_text());
    s.team_sizes = {3, 3};
    s.max_ticks = 600;
    s.opponent = dsl::parse_or_throw(aggressive_tree_text());
    return s;
}

std::vector<Scenario> scheduler_suite() {
    Scenario open;
    open.name = "open_field";
    open.map = map_of(open_field_map_text());
    open.team_sizes = {1, 2};
    open.rules.respawn = false;
    open.max_ticks = 400;

    Scenario corridor;
    corridor.name = "corridor";
    corridor.map = map_of(corridor_map_text());
    corridor.team_sizes = {1, 2};
    corridor.rules.respawn = false;
    corridor.max_ticks = 400;
    corridor.opponent = dsl::parse_or_throw(turret_tree_text());
    return {open, corridor};
}

}  // namespace bta::fps
