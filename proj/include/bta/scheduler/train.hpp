#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bta/arena/metrics.hpp"
#include "bta/fps/scenarios.hpp"
#include "bta/neural/net.hpp"
#include "bta/scheduler/library.hpp"
#include "bta/scheduler/scheduler.hpp"

namespace bta::scheduler {

struct SchedulerTrainConfig {
    int episodes = 5;  // per (scenario, tree) for labels and per scenario for comparisons
    std::uint64_t seed = 1;
    int hidden = 16;
    int iterations = 400;
    double learning_rate = 1e-2;
    SwitchPolicy switching;

    // Throws bta::Error("bad-config").
    void check() const;
};

// Team-0 kills minus deaths.
double episode_reward(const arena::GameMetrics& metrics);

struct ScenarioLabel {
    std::string scenario;
    std::vector<double> mean_reward;  // per library entry
    int label = 0;                    // argmax, lowest index on ties
};

struct Sample {
    Features features{};
    int label = 0;
};

struct SchedulerTrainReport {
    std::vector<ScenarioLabel> labels;
    std::vector<Sample> samples;
    std::vector<double> loss;  // mean cross-entropy per iteration
    double train_accuracy = 0.0;
    std::vector<std::string> warnings;  // "no-selection-signal: ..."
};

// Episode seed shared by every tree on a scenario.
std::uint64_t scheduler_episode_seed(std::uint64_t base, const std::string& scenario, int episode);

// Evaluates every library tree on every scenario.
std::vector<ScenarioLabel> label_scenarios(const PolicyLibrary& library, const std::vector<fps::Scenario>& scenarios,
                                           const SchedulerTrainConfig& config);

// Observations a tree meets in a scenario: tick 0 and every review boundary.
std::vector<Features> collect_features(const fps::Scenario& scenario, const btree::CompiledPolicy& policy,
                                       std::uint64_t seed, const SwitchPolicy& switching);

// Labels every observation met by a scenario's winning tree with that tree's
// index, then fits a two-layer net by cross-entropy.
neural::NetParams train_scheduler(const PolicyLibrary& library, const std::vector<fps::Scenario>& scenarios,
                                  const SchedulerTrainConfig& config, SchedulerTrainReport* report = nullptr);

// Fits the classifier alone (used by train_scheduler).
neural::NetParams fit_classifier(const std::vector<Sample>& samples, int classes, const SchedulerTrainConfig& config,
                                 std::vector<double>* loss = nullptr);

double classifier_accuracy(const neural::NetParams& params, const std::vector<Sample>& samples);

struct SuiteRow {
    std::string scenario;
    std::vector<double> fixed;  // mean reward of each library tree
    double scheduled = 0.0;     // mean reward under the scheduler
    int label = 0;
    double selection_accuracy = 0.0;  // share of selections equal to the label
    double dominant_match = 0.0;      // share of episodes whose dominant tree is the label
};

struct SuiteComparison {
    std::vector<SuiteRow> rows;
    std::vector<double> fixed_mean;  // across scenarios
    double scheduled_mean = 0.0;
    double selection_accuracy = 0.0;  // over all selections

    // Scheduler mean strictly above every fixed tree's mean.
    bool dominates() const;
    std::string to_table() const;  // CSV
};

// Held-out comparison: uses seeds disjoint from training.
SuiteComparison compare_on_suite(const neural::NetParams& params, const PolicyLibrary& library,
                                 const std::vector<fps::Scenario>& scenarios, const SchedulerTrainConfig& config);

}  // namespace bta::scheduler
