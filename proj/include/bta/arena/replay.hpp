#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bta/arena/world.hpp"

namespace bta::arena {

struct AgentSnapshot {
    int id = -1;
    int team = 0;
    Vec2 position;
    Vec2 facing;
    int health = 0;
    int ammo = 0;
    bool alive = false;
    int aim_target = -1;

    friend bool operator==(const AgentSnapshot&, const AgentSnapshot&) = default;
};

// State after the step that produced `tick`, plus the joint action and events
// of that step.
struct TraceFrame {
    int tick = 0;
    std::vector<AgentSnapshot> agents;
    std::vector<Action> actions;
    std::vector<Event> events;

    friend bool operator==(const TraceFrame&, const TraceFrame&) = default;
};

struct ReplayTrace {
    std::shared_ptr<const MapSpec> map;
    std::uint64_t seed = 0;
    std::array<int, kTeamCount> team_sizes{};
    CombatRules rules;
    std::vector<AgentSnapshot> initial;
    std::vector<TraceFrame> frames;

    // Map compared by content hash.
    friend bool operator==(const ReplayTrace& a, const ReplayTrace& b);
};

std::vector<AgentSnapshot> snapshot(const World& world);

inline constexpr std::uint16_t kReplayVersion = 1;

// "BTRP", version, map hash, seed, then the map text, rules and a sequence of
// u32-length-prefixed frame records. Little endian throughout.
std::vector<std::uint8_t> encode_replay(const ReplayTrace& trace);
// Throws bta::Error with code bad-magic, bad-version, truncated or map-mismatch.
ReplayTrace decode_replay(std::span<const std::uint8_t> bytes);

void save_replay(const ReplayTrace& trace, const std::string& path);
ReplayTrace load_replay(const std::string& path);

std::uint64_t trace_hash(const ReplayTrace& trace);

// Rebuilds a trace by stepping a fresh world with the recorded joint actions.
ReplayTrace resimulate(const ReplayTrace& trace);

}  // namespace bta::arena
