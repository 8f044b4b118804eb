#include "bta/neural/train.hpp"

#include <algorithm>
#include <cmath>

#include "bta/core/error.hpp"
#include "bta/neural/adam.hpp"

namespace bta::neural {

namespace {

struct StepRecord {
    TaskObservation x;
    std::vector<bool> legal;
    int action = 0;
    double reward = 0.0;
};

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

arena::Cell random_free_cell(const arena::MapSpec& map, Rng& rng) {
    for (;;) {
        const arena::Cell c{static_cast<int>(uniform_index(rng, static_cast<std::size_t>(map.width()))),
                            static_cast<int>(uniform_index(rng, static_cast<std::size_t>(map.height())))};
        if (!map.blocked(c)) {
            return c;
        }
    }
}

}  // namespace

NetParams initial_params(const TrainConfig& config, int outputs) {
    Rng rng(derive_seed(config.seed, "init"));
    return NetParams::random(kTaskObservationSize, config.hidden, outputs, rng);
}

NetParams train_task_node(TaskEnvironment& env, const TrainConfig& config, TrainReport* report) {
    NetParams params = initial_params(config, env.action_count());
    std::vector<double> theta = flatten(params);
    Adam adam(theta.size(), config.learning_rate);
    Rng policy_rng(derive_seed(config.seed, "policy"));
    Rng env_rng(derive_seed(config.seed, "env"));

    for (int it = 0; it < config.iterations; ++it) {
        std::vector<StepRecord> steps;
        std::vector<double> to_go;
        double total_return = 0.0;
        for (int ep = 0; ep < config.episodes_per_iteration; ++ep) {
            const std::size_t first = steps.size();
            env.reset(env_rng);
            while (!env.done()) {
                StepRecord rec;
                rec.x = env.observe();
                rec.legal = env.legal();
                rec.action = sample(forward(params, rec.x, rec.legal), policy_rng);
                rec.reward = env.act(rec.action);
                total_return += rec.reward;
                steps.push_back(std::move(rec));
            }
            to_go.resize(steps.size());
            double acc = 0.0;
            for (std::size_t i = steps.size(); i-- > first;) {
                acc = steps[i].reward + config.gamma * acc;
                to_go[i] = acc;
            }
        }
        if (report != nullptr) {
            report->mean_return.push_back(total_return / std::max(1, config.episodes_per_iteration));
        }
        if (steps.empty()) {
            continue;
        }

        double mean = 0.0;
        for (double g : to_go) {
            mean += g;
        }
        mean /= static_cast<double>(to_go.size());
        double var = 0.0;
        for (double g : to_go) {
            var += (g - mean) * (g - mean);
        }
        const double sd = std::sqrt(var / static_cast<double>(to_go.size()));
        const double norm = sd > 1e-8 ? sd : 1.0;

        NetParams grad = NetParams::zeros(params.input_size(), params.hidden_size(), params.output_size());
        const double inv_n = 1.0 / static_cast<double>(steps.size());
        for (std::size_t i = 0; i < steps.size(); ++i) {
            const double advantage = (to_go[i] - mean) / norm;
            log_prob_gradient(params, steps[i].x, steps[i].action, advantage * inv_n, grad, steps[i].legal);
        }
        const auto g = flatten(grad);
        if (!all_finite(g)) {
            throw Error("diverged", "non-finite gradient at iteration " + std::to_string(it));
        }
        adam.step(theta, g);
        if (!all_finite(theta)) {
            throw Error("diverged", "non-finite parameters at iteration " + std::to_string(it));
        }
        unflatten(theta, params);
    }
    return params;
}

MapSampler wall_map_sampler(int size, int max_walls) {
    return [size, max_walls](Rng& rng) {
        const int walls = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(max_walls + 1)));
        return std::make_shared<const arena::MapSpec>(arena::random_wall_map(size, size, walls, rng, "train"));
    };
}

MoveToEnvironment::MoveToEnvironment(MapSampler sampler, int min_distance, int max_distance)
    : sampler_(std::move(sampler)), min_distance_(min_distance), max_distance_(max_distance) {}

void MoveToEnvironment::reset(Rng& rng) {
    for (;;) {
        map_ = sampler_(rng);
        for (int attempt = 0; attempt < 16; ++attempt) {
            const Vec2 start = arena::cell_center(random_free_cell(*map_, rng));
            const Vec2 goal = arena::cell_center(random_free_cell(*map_, rng));
            auto field = std::make_unique<arena::DistanceField>(*map_, goal);
            const int d = field->at(start);
            if (d < min_distance_ || d > max_distance_) {
                continue;
            }
            position_ = start;
            goal_ = goal;
            field_ = std::move(field);
            facing_ = Vec2{1.0, 0.0};
            optimal_ = d;
            ticks_ = 0;
            horizon_ = 2 * d + 8;
            return;
        }
    }
}

TaskObservation MoveToEnvironment::observe() const {
    return encode_task_observation(*map_, position_, facing_, goal_);
}

std::vector<bool> MoveToEnvironment::legal() const { return move_legality(*map_, position_); }

double MoveToEnvironment::act(int action) {
    const int before = field_->at(position_);
    if (action >= 0 && action < arena::kDirectionCount) {
        if (const auto next = arena::try_move(*map_, position_, action)) {
            position_ = *next;
            facing_ = arena::direction_vector(action).normalized();
        }
    }
    ++ticks_;
    return static_cast<double>(before - field_->at(position_)) - 0.1;
}

bool MoveToEnvironment::arrived() const { return field_->at(position_) == 0; }

bool MoveToEnvironment::done() const { return arrived() || ticks_ >= horizon_; }

ShootEnvironment::ShootEnvironment(MapSampler sampler, int horizon) : sampler_(std::move(sampler)), horizon_(horizon) {}

void ShootEnvironment::reset(Rng& rng) {
    arena::CombatRules rules;
    rules.respawn = false;
    for (;;) {
        auto map = sampler_(rng);
        world_ = arena::make_world(map, {1, 1}, rules, rng);
        auto& shooter = world_.agents[0];
        auto& target = world_.agents[1];
        shooter.position = arena::cell_center(random_free_cell(*map, rng));
        target.position = arena::cell_center(random_free_cell(*map, rng));
        const double angle = 2.0 * 3.14159265358979323846 * uniform01(rng);
        shooter.facing = Vec2{std::cos(angle), std::sin(angle)};
        if (shooter.position != target.position && arena::can_see(world_, shooter, target.position)) {
            break;
        }
    }
    step_rng_.seed(uniform_index(rng, 1u << 30));
    ticks_ = 0;
}

TaskObservation ShootEnvironment::observe() const {
    const auto& a = world_.agents[0];
    return encode_task_observation(*world_.map, a.position, a.facing, world_.agents[1].position);
}

std::vector<bool> shoot_legality(const arena::Observation& obs, int target) {
    std::vector<bool> legal(kShootOutputs, true);
    legal[kShootAim] = std::any_of(obs.visible_enemies.begin(), obs.visible_enemies.end(),
                                   [&](const arena::SeenAgent& e) { return e.id == target; });
    legal[kShootFire] = obs.aim_target == target && target >= 0 && obs.ammo > 0;
    return legal;
}

std::vector<bool> ShootEnvironment::legal() const { return shoot_legality(arena::observe(world_, 0), 1); }

double ShootEnvironment::act(int action) {
    std::vector<arena::Action> joint(2, arena::Action::wait());
    if (action == kShootAim) {
        joint[0] = arena::Action::aim(1);
    } else if (action == kShootFire) {
        joint[0] = arena::Action::fire();
    }
    const auto events = arena::step(world_, joint, step_rng_);
    ++ticks_;
    double reward = 0.0;
    for (const auto& e : events) {
        if (e.kind == arena::EventKind::Hit && e.actor == 0 && e.target == 1) {
            reward += 1.0;
        }
    }
    return reward;
}

bool ShootEnvironment::done() const { return !world_.agents[1].alive || ticks_ >= horizon_; }

MoveToBenchmark benchmark_move_to(const NetParams& params, MapSampler sampler, int episodes, std::uint64_t seed,
                                  double slack) {
    MoveToEnvironment env(std::move(sampler));
    Rng rng(seed);
    MoveToBenchmark out;
    double ratio_sum = 0.0;
    for (int ep = 0; ep < episodes; ++ep) {
        env.reset(rng);
        const int budget = static_cast<int>(std::floor(slack * env.optimal_ticks()));
        while (!env.arrived() && env.ticks() < budget) {
            env.act(argmax(forward(params, env.observe(), env.legal())));
        }
        ++out.episodes;
        if (env.arrived()) {
            ++out.successes;
            ratio_sum += static_cast<double>(env.ticks()) / env.optimal_ticks();
        }
    }
    out.mean_ratio = out.successes > 0 ? ratio_sum / out.successes : 0.0;
    return out;
}

}  // namespace bta::neural
