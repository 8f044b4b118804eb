#pragma once

#include <cstdint>
#include <span>

#include "bta/arena/episode.hpp"
#include "bta/btree/policy.hpp"
#include "bta/fps/bindings.hpp"
#include "bta/fps/scenarios.hpp"

namespace bta::fps {

// Compiles against the shooter catalog; neural tasks where weights exist.
btree::CompiledPolicy compile_shooter(const dsl::BtNode& tree, const TaskWeights& weights = {},
                                      btree::CompileOptions options = {});

// Team 0 plays clones of `policy`, team 1 the scenario opponent (rule
// bindings) or nothing at all.
arena::EpisodeResult run_scenario(const Scenario& scenario, const btree::CompiledPolicy& policy, std::uint64_t seed,
                                  bool record_trace = true);

// Same, with arbitrary team-0 controllers (one per team-0 agent).
arena::EpisodeResult run_scenario(const Scenario& scenario, std::span<arena::AgentController* const> team0,
                                  std::uint64_t seed, bool record_trace = true);

}  // namespace bta::fps
