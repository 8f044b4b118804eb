#include "bta/fps/match.hpp"

#include "bta/core/error.hpp"
#include "bta/fps/catalog.hpp"

namespace bta::fps {

btree::CompiledPolicy compile_shooter(const dsl::BtNode& tree, const TaskWeights& weights,
                                      btree::CompileOptions options) {
    static const dsl::NodeCatalog catalog = shooter_catalog();
    return btree::CompiledPolicy::compile(tree, catalog, shooter_bindings(weights), options);
}

arena::EpisodeResult run_scenario(const Scenario& scenario, std::span<arena::AgentController* const> team0,
                                  std::uint64_t seed, bool record_trace) {
    if (static_cast<int>(team0.size()) != scenario.team_sizes[0]) {
        throw Error("bad-episode", "scenario " + scenario.name + " needs " + std::to_string(scenario.team_sizes[0]) +
                                       " team-0 controllers");
    }
    std::vector<std::unique_ptr<arena::AgentController>> owned;
    std::vector<arena::AgentController*> controllers(team0.begin(), team0.end());
    std::optional<btree::CompiledPolicy> opponent;
    if (scenario.opponent) {
        opponent = compile_shooter(*scenario.opponent);
    }
    for (int i = 0; i < scenario.team_sizes[1]; ++i) {
        if (opponent) {
            owned.push_back(std::make_unique<btree::PolicyAgent>(opponent->clone()));
        } else {
            owned.push_back(std::make_unique<arena::IdleController>());
        }
        controllers.push_back(owned.back().get());
    }
    arena::EpisodeConfig cfg;
    cfg.map = scenario.map;
    cfg.team_sizes = scenario.team_sizes;
    cfg.rules = scenario.rules;
    cfg.seed = seed;
    cfg.max_ticks = scenario.max_ticks;
    cfg.record_trace = record_trace;
    return arena::run_episode(cfg, controllers);
}

arena::EpisodeResult run_scenario(const Scenario& scenario, const btree::CompiledPolicy& policy, std::uint64_t seed,
                                  bool record_trace) {
    std::vector<std::unique_ptr<btree::PolicyAgent>> agents;
    std::vector<arena::AgentController*> team0;
    for (int i = 0; i < scenario.team_sizes[0]; ++i) {
        agents.push_back(std::make_unique<btree::PolicyAgent>(policy.clone()));
        team0.push_back(agents.back().get());
    }
    return run_scenario(scenario, team0, seed, record_trace);
}

}  // namespace bta::fps
