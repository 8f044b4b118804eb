#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "bta/arena/map.hpp"
#include "bta/arena/navigation.hpp"
#include "bta/arena/world.hpp"
#include "bta/neural/features.hpp"
#include "bta/neural/net.hpp"

namespace bta::neural {

// Single-agent episodic task seen through TaskObservation features.
class TaskEnvironment {
public:
    virtual ~TaskEnvironment() = default;

    virtual int action_count() const = 0;
    virtual void reset(Rng& rng) = 0;
    virtual TaskObservation observe() const = 0;
    // Output-sized mask of executable verbs.
    virtual std::vector<bool> legal() const = 0;
    // Applies one verb and returns its reward.
    virtual double act(int action) = 0;
    virtual bool done() const = 0;
};

struct TrainConfig {
    int hidden = 32;
    double learning_rate = 3e-3;
    int iterations = 200;
    int episodes_per_iteration = 64;
    double gamma = 0.8;
    std::uint64_t seed = 1;
};

struct TrainReport {
    std::vector<double> mean_return;  // per iteration
};

// Seeded initialisation for a given config and output count; this is also
// what zero-iteration training returns.
NetParams initial_params(const TrainConfig& config, int outputs);

// REINFORCE with reward-to-go, mean baseline and Adam. Throws
// bta::Error("diverged") naming the iteration when anything goes non-finite.
NetParams train_task_node(TaskEnvironment& env, const TrainConfig& config, TrainReport* report = nullptr);

using MapSampler = std::function<std::shared_ptr<const arena::MapSpec>(Rng&)>;

// 16x16 maps with 0-6 random wall segments.
MapSampler wall_map_sampler(int size = 16, int max_walls = 6);

// Navigate to a goal cell centre. Reward per tick is the drop in geodesic
// (BFS) distance minus a small time cost; ends on arrival or at the horizon.
class MoveToEnvironment : public TaskEnvironment {
public:
    explicit MoveToEnvironment(MapSampler sampler, int min_distance = 4, int max_distance = 48);

    int action_count() const override { return kMoveOutputs; }
    void reset(Rng& rng) override;
    TaskObservation observe() const override;
    std::vector<bool> legal() const override;
    double act(int action) override;
    bool done() const override;

    int optimal_ticks() const { return optimal_; }
    int ticks() const { return ticks_; }
    bool arrived() const;

private:
    MapSampler sampler_;
    int min_distance_;
    int max_distance_;
    std::shared_ptr<const arena::MapSpec> map_;
    std::unique_ptr<arena::DistanceField> field_;
    Vec2 position_;
    Vec2 facing_{1.0, 0.0};
    Vec2 goal_;
    int optimal_ = 0;
    int ticks_ = 0;
    int horizon_ = 0;
};

// Kill a stationary target that is in view. +1 per hit.
class ShootEnvironment : public TaskEnvironment {
public:
    explicit ShootEnvironment(MapSampler sampler, int horizon = 24);

    int action_count() const override { return kShootOutputs; }
    void reset(Rng& rng) override;
    TaskObservation observe() const override;
    std::vector<bool> legal() const override;
    double act(int action) override;
    bool done() const override;

private:
    MapSampler sampler_;
    int horizon_;
    arena::World world_;
    Rng step_rng_;
    int ticks_ = 0;
};

// Legality of the shoot head for an agent aiming at `target`: fire needs an
// established aim on that target and ammo.
std::vector<bool> shoot_legality(const arena::Observation& obs, int target);

struct MoveToBenchmark {
    int episodes = 0;
    int successes = 0;  // arrived within slack x optimal ticks
    double mean_ratio = 0.0;  // ticks / optimal over successes
};

// Greedy (argmax) rollouts on freshly sampled episodes.
MoveToBenchmark benchmark_move_to(const NetParams& params, MapSampler sampler, int episodes, std::uint64_t seed,
                                  double slack = 1.5);

}  // namespace bta::neural
