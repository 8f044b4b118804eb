#include "bta/scheduler/train.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bta/core/error.hpp"
#include "bta/core/rng.hpp"
#include "bta/fps/match.hpp"
#include "bta/neural/adam.hpp"

namespace bta::scheduler {

void SchedulerTrainConfig::check() const {
    if (episodes < 1 || hidden < 1 || iterations < 0 || !(learning_rate > 0.0)) {
        throw Error("bad-config", "scheduler training needs episodes >= 1, hidden >= 1, iterations >= 0, lr > 0");
    }
    switching.check();
}

double episode_reward(const arena::GameMetrics& metrics) {
    return static_cast<double>(metrics.team(0).kills) - static_cast<double>(metrics.team(0).deaths);
}

std::uint64_t scheduler_episode_seed(std::uint64_t base, const std::string& scenario, int episode) {
    return derive_seed(derive_seed(base, scenario), static_cast<std::uint64_t>(episode));
}

std::vector<ScenarioLabel> label_scenarios(const PolicyLibrary& library, const std::vector<fps::Scenario>& scenarios,
                                           const SchedulerTrainConfig& config) {
    config.check();
    const auto policies = library.compile();
    std::vector<ScenarioLabel> out;
    for (const auto& s : scenarios) {
        ScenarioLabel l;
        l.scenario = s.name;
        for (const auto& p : policies) {
            double sum = 0.0;
            for (int e = 0; e < config.episodes; ++e) {
                const auto r = fps::run_scenario(s, p, scheduler_episode_seed(config.seed, s.name, e), false);
                sum += episode_reward(r.metrics);
            }
            l.mean_reward.push_back(sum / config.episodes);
        }
        l.label = static_cast<int>(std::max_element(l.mean_reward.begin(), l.mean_reward.end()) - l.mean_reward.begin());
        out.push_back(std::move(l));
    }
    return out;
}

namespace {

// Passes through to a policy agent, recording features at review points.
class RecordingAgent : public arena::AgentController {
public:
    RecordingAgent(btree::CompiledPolicy policy, int period, std::vector<Features>& out)
        : agent_(std::move(policy)), period_(period), out_(out) {}

    void on_episode_start(std::uint64_t seed) override { agent_.on_episode_start(seed); }
    void on_death() override { agent_.on_death(); }
    arena::Action act(const arena::Observation& obs) override {
        if (obs.tick % period_ == 0) {
            out_.push_back(scheduler_features(obs));
        }
        return agent_.act(obs);
    }

private:
    btree::PolicyAgent agent_;
    int period_;
    std::vector<Features>& out_;
};

}  // namespace

std::vector<Features> collect_features(const fps::Scenario& scenario, const btree::CompiledPolicy& policy,
                                       std::uint64_t seed, const SwitchPolicy& switching) {
    switching.check();
    std::vector<Features> out;
    std::vector<std::unique_ptr<RecordingAgent>> agents;
    std::vector<arena::AgentController*> team0;
    for (int i = 0; i < scenario.team_sizes[0]; ++i) {
        agents.push_back(std::make_unique<RecordingAgent>(policy.clone(), switching.review_period, out));
        team0.push_back(agents.back().get());
    }
    fps::run_scenario(scenario, team0, seed, false);
    return out;
}

neural::NetParams fit_classifier(const std::vector<Sample>& samples, int classes, const SchedulerTrainConfig& config,
                                 std::vector<double>* loss) {
    config.check();
    if (classes < 1) {
        throw Error("bad-config", "classifier needs at least one class");
    }
    Rng rng(derive_seed(config.seed, "scheduler-init"));
    auto params = neural::NetParams::random(kFeatureCount, config.hidden, classes, rng);
    if (samples.empty() || classes == 1) {
        return params;
    }
    auto theta = neural::flatten(params);
    neural::Adam adam(theta.size(), config.learning_rate);
    const double scale = 1.0 / static_cast<double>(samples.size());
    for (int it = 0; it < config.iterations; ++it) {
        auto grad = neural::NetParams::zeros(kFeatureCount, config.hidden, classes);
        double total = 0.0;
        for (const auto& s : samples) {
            total -= neural::log_prob_gradient(params, s.features, s.label, scale, grad);
        }
        if (!std::isfinite(total)) {
            throw Error("diverged", "scheduler training diverged at iteration " + std::to_string(it));
        }
        if (loss) {
            loss->push_back(total * scale);
        }
        adam.step(theta, neural::flatten(grad));
        neural::unflatten(theta, params);
    }
    return params;
}

double classifier_accuracy(const neural::NetParams& params, const std::vector<Sample>& samples) {
    if (samples.empty()) {
        return 1.0;
    }
    int hits = 0;
    for (const auto& s : samples) {
        hits += select(params, static_cast<std::size_t>(params.output_size()), s.features) == s.label ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

neural::NetParams train_scheduler(const PolicyLibrary& library, const std::vector<fps::Scenario>& scenarios,
                                  const SchedulerTrainConfig& config, SchedulerTrainReport* report) {
    config.check();
    if (scenarios.empty()) {
        throw Error("bad-config", "scheduler training needs at least one scenario");
    }
    SchedulerTrainReport local;
    auto& rep = report ? *report : local;
    rep = {};
    rep.labels = label_scenarios(library, scenarios, config);
    const auto policies = library.compile();
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const auto& s = scenarios[i];
        const int label = rep.labels[i].label;
        for (int e = 0; e < config.episodes; ++e) {
            const auto feats = collect_features(s, policies[static_cast<std::size_t>(label)],
                                                scheduler_episode_seed(config.seed, s.name, e), config.switching);
            for (const auto& f : feats) {
                rep.samples.push_back({f, label});
            }
        }
    }
    const bool single = std::all_of(rep.labels.begin(), rep.labels.end(),
                                    [&](const ScenarioLabel& l) { return l.label == rep.labels.front().label; });
    if (single && library.size() > 1) {
        rep.warnings.push_back("no-selection-signal: tree " + std::to_string(rep.labels.front().label) +
                               " wins every scenario");
    }
    auto params = fit_classifier(rep.samples, static_cast<int>(library.size()), config, &rep.loss);
    rep.train_accuracy = library.size() == 1 ? 1.0 : classifier_accuracy(params, rep.samples);
    return params;
}

bool SuiteComparison::dominates() const {
    return std::all_of(fixed_mean.begin(), fixed_mean.end(), [&](double f) { return scheduled_mean > f; });
}

std::string SuiteComparison::to_table() const {
    std::ostringstream os;
    os << "scenario,label";
    for (std::size_t i = 0; i < fixed_mean.size(); ++i) {
        os << ",tree" << i;
    }
    os << ",scheduler,selection_accuracy\n";
    for (const auto& r : rows) {
        os << r.scenario << ',' << r.label;
        for (double f : r.fixed) {
            os << ',' << f;
        }
        os << ',' << r.scheduled << ',' << r.selection_accuracy << '\n';
    }
    os << "mean,";
    for (double f : fixed_mean) {
        os << ',' << f;
    }
    os << ',' << scheduled_mean << ',' << selection_accuracy << '\n';
    return os.str();
}

SuiteComparison compare_on_suite(const neural::NetParams& params, const PolicyLibrary& library,
                                 const std::vector<fps::Scenario>& scenarios, const SchedulerTrainConfig& config) {
    config.check();
    // Disjoint from the training seeds.
    SchedulerTrainConfig held_out = config;
    held_out.seed = derive_seed(config.seed, "held-out");
    const auto labels = label_scenarios(library, scenarios, held_out);
    const auto policies = library.compile();
    const auto selector = net_selector(std::make_shared<const neural::NetParams>(params), library.size());

    SuiteComparison out;
    out.fixed_mean.assign(library.size(), 0.0);
    long matched = 0;
    long total = 0;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const auto& s = scenarios[i];
        SuiteRow row;
        row.scenario = s.name;
        row.fixed = labels[i].mean_reward;
        row.label = labels[i].label;
        long row_matched = 0;
        long row_total = 0;
        int dominant_hits = 0;
        for (int e = 0; e < config.episodes; ++e) {
            const auto seed = scheduler_episode_seed(held_out.seed, s.name, e);
            // Count selections against the label with a wrapping selector.
            const SelectFn counting = [&](const arena::Observation& obs) {
                const int c = selector(obs);
                ++row_total;
                row_matched += c == row.label ? 1 : 0;
                return c;
            };
            const auto r = run_scheduled_episode(s, policies, counting, config.switching, seed, false);
            row.scheduled += episode_reward(r.episode.metrics);
            dominant_hits += std::all_of(r.dominant.begin(), r.dominant.end(), [&](int d) { return d == row.label; })
                                 ? 1
                                 : 0;
        }
        row.scheduled /= config.episodes;
        row.selection_accuracy = row_total > 0 ? static_cast<double>(row_matched) / row_total : 1.0;
        row.dominant_match = static_cast<double>(dominant_hits) / config.episodes;
        matched += row_matched;
        total += row_total;
        for (std::size_t t = 0; t < row.fixed.size(); ++t) {
            out.fixed_mean[t] += row.fixed[t] / static_cast<double>(scenarios.size());
        }
        out.scheduled_mean += row.scheduled / static_cast<double>(scenarios.size());
        out.rows.push_back(std::move(row));
    }
    out.selection_accuracy = total > 0 ? static_cast<double>(matched) / total : 1.0;
    return out;
}

}  // namespace bta::scheduler
