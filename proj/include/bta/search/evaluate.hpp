#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bta/dsl/ast.hpp"
#include "bta/fps/bindings.hpp"
#include "bta/fps/scenarios.hpp"
#include "bta/search/objective.hpp"
#include "bta/search/tactical.hpp"

namespace bta::search {

// Team-0 means over all evaluation episodes.
struct MetricsSummary {
    int episodes = 0;
    double kills = 0.0;
    double deaths = 0.0;
    double shots = 0.0;
    double hits = 0.0;
    double damage = 0.0;
    double objective_ticks = 0.0;
    // Mean over the episodes where it is defined.
    std::optional<double> time_between_kills;

    bool operator==(const MetricsSummary&) const = default;
};

MetricsSummary summarize(std::span<const arena::GameMetrics> episodes, int team = 0);

struct EvalConfig {
    std::vector<fps::Scenario> scenarios;
    int episodes = 5;  // per scenario
    std::uint64_t seed = 1;
    Objective objective{{{"time_between_kills", 1.0}}};
    fps::TaskWeights weights;
    bool tactical = false;  // compute reports even if the objective does not need them
};

struct Evaluation {
    double reward = 0.0;
    bool fallback = false;      // objective undefined on every episode
    int undefined_episodes = 0;  // counted as 0 in the mean
    MetricsSummary summary;
    std::optional<TacticalReport> tactical;
    std::vector<std::uint64_t> trace_hashes;  // one per episode

    bool operator==(const Evaluation&) const = default;
};

// The seed of episode e of scenario s; identical for every candidate.
std::uint64_t episode_seed(const EvalConfig& config, std::size_t scenario, int episode);

// Throws bta::Error("bad-config") for an empty scenario list or episodes < 1.
Evaluation evaluate_tree(const dsl::BtNode& tree, const EvalConfig& config);

// Independent evaluations on up to `jobs` threads; results in input order.
std::vector<Evaluation> evaluate_many(std::span<const dsl::BtNode> trees, const EvalConfig& config, int jobs = 1);

// Runs `fn(i)` for i in [0, n) on up to `jobs` threads. Exceptions are
// rethrown (the first by index) after all workers finish.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace bta::search
