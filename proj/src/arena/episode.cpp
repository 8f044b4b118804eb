#include "bta/arena/episode.hpp"

#include "bta/core/error.hpp"

namespace bta::arena {

namespace {

bool team_eliminated(const World& world) {
    for (int t = 0; t < kTeamCount; ++t) {
        if (world.team_sizes[static_cast<std::size_t>(t)] == 0) {
            continue;
        }
        bool any_alive = false;
        for (const auto& a : world.agents) {
            any_alive = any_alive || (a.team == t && a.alive);
        }
        if (!any_alive) {
            return true;
        }
    }
    return false;
}

}  // namespace

EpisodeResult run_episode(const EpisodeConfig& config, std::span<AgentController* const> controllers) {
    if (config.max_ticks < 0 || config.max_ticks > kMaxEpisodeTicks) {
        throw Error("bad-episode", "max_ticks must be in [0, " + std::to_string(kMaxEpisodeTicks) + "]");
    }
    const auto expected = static_cast<std::size_t>(config.team_sizes[0] + config.team_sizes[1]);
    if (controllers.size() != expected) {
        throw Error("bad-episode", "expected " + std::to_string(expected) + " controllers, got " +
                                       std::to_string(controllers.size()));
    }
    for (const auto* c : controllers) {
        if (c == nullptr) {
            throw Error("bad-episode", "every agent needs a controller");
        }
    }

    Rng rng(config.seed);
    World world = make_world(config.map, config.team_sizes, config.rules, rng);
    for (std::size_t i = 0; i < controllers.size(); ++i) {
        controllers[i]->on_episode_start(derive_seed(config.seed, static_cast<std::uint64_t>(i + 1)));
    }

    EpisodeResult result;
    result.trace.map = config.map;
    result.trace.seed = config.seed;
    result.trace.team_sizes = config.team_sizes;
    result.trace.rules = config.rules;
    result.trace.initial = snapshot(world);
    MetricsRecorder recorder(world);

    std::vector<Action> joint(world.agents.size());
    while (world.tick < config.max_ticks && !(!config.rules.respawn && team_eliminated(world))) {
        for (const auto& a : world.agents) {
            Action act = Action::wait();
            if (a.alive) {
                act = controllers[static_cast<std::size_t>(a.id)]->act(observe(world, a.id));
            }
            act.agent = a.id;
            joint[static_cast<std::size_t>(a.id)] = act;
        }
        const int tick = world.tick;
        auto events = step(world, joint, rng);
        for (const auto& e : events) {
            if (e.kind == EventKind::Kill) {
                controllers[static_cast<std::size_t>(e.target)]->on_death();
            }
        }
        recorder.record(world, events);
        if (config.record_trace) {
            result.trace.frames.push_back({tick, snapshot(world), joint, std::move(events)});
        }
    }
    for (auto* c : controllers) {
        for (auto& d : c->take_diagnostics()) {
            result.diagnostics.push_back(std::move(d));
        }
    }
    result.metrics = recorder.finish(world.tick);
    return result;
}

GameMetrics replay_metrics(const ReplayTrace& trace) {
    Rng rng(trace.seed);
    World world = make_world(trace.map, trace.team_sizes, trace.rules, rng);
    MetricsRecorder recorder(world);
    for (const auto& f : trace.frames) {
        recorder.record(world, step(world, f.actions, rng));
    }
    return recorder.finish(world.tick);
}

}  // namespace bta::arena
