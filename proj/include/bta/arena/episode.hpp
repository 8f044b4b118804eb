#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bta/arena/metrics.hpp"
#include "bta/arena/replay.hpp"
#include "bta/arena/world.hpp"

namespace bta::arena {

inline constexpr int kMaxEpisodeTicks = 10000;

// Anything that turns observations into actions for one agent.
class AgentController {
public:
    virtual ~AgentController() = default;

    virtual void on_episode_start(std::uint64_t seed) { (void)seed; }
    virtual Action act(const Observation& obs) = 0;
    virtual void on_death() {}
    // Runtime diagnostics accumulated since the last call.
    virtual std::vector<std::string> take_diagnostics() { return {}; }
};

// Does nothing, forever.
class IdleController : public AgentController {
public:
    Action act(const Observation&) override { return Action::wait(); }
};

struct EpisodeConfig {
    std::shared_ptr<const MapSpec> map;
    std::array<int, kTeamCount> team_sizes{1, 1};
    CombatRules rules;
    std::uint64_t seed = 0;
    int max_ticks = 600;
    bool record_trace = true;
};

struct EpisodeResult {
    GameMetrics metrics;
    ReplayTrace trace;
    std::vector<std::string> diagnostics;
};

// controllers[i] drives agent i (team 0 agents first). Throws bta::Error
// ("bad-episode") when the controller count or max_ticks is out of contract.
EpisodeResult run_episode(const EpisodeConfig& config, std::span<AgentController* const> controllers);

// Re-steps the recorded joint actions and recomputes the metrics.
GameMetrics replay_metrics(const ReplayTrace& trace);

}  // namespace bta::arena
