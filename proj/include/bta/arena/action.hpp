#pragma once

#include <cstdint>
#include <string>

namespace bta::arena {

enum class Verb : std::uint8_t { Wait = 0, Move = 1, Aim = 2, Fire = 3 };

// One primitive verb per agent per tick.
struct Action {
    Verb verb = Verb::Wait;
    int direction = -1;  // Move: index into kDirections
    int target = -1;     // Aim: enemy agent id
    int agent = -1;      // issuing agent; filled in by the episode runner

    static Action wait() { return {}; }
    static Action move(int dir) { return {Verb::Move, dir, -1, -1}; }
    static Action aim(int target) { return {Verb::Aim, -1, target, -1}; }
    static Action fire() { return {Verb::Fire, -1, -1, -1}; }

    friend bool operator==(const Action&, const Action&) = default;
};

std::string to_string(const Action& a);

}  // namespace bta::arena
