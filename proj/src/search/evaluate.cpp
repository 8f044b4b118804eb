#include "bta/search/evaluate.hpp"

#include <atomic>
#include <exception>
#include <thread>

#include "bta/core/error.hpp"
#include "bta/core/rng.hpp"
#include "bta/fps/match.hpp"

namespace bta::search {

MetricsSummary summarize(std::span<const arena::GameMetrics> episodes, int team) {
    MetricsSummary s;
    s.episodes = static_cast<int>(episodes.size());
    if (episodes.empty()) {
        return s;
    }
    double tbk = 0.0;
    int tbk_n = 0;
    for (const auto& m : episodes) {
        const auto& t = m.team(team);
        s.kills += t.kills;
        s.deaths += t.deaths;
        s.shots += t.shots;
        s.hits += t.hits;
        s.damage += t.damage_dealt;
        s.objective_ticks += t.objective_ticks;
        if (const auto v = t.time_between_kills()) {
            tbk += *v;
            ++tbk_n;
        }
    }
    const double n = static_cast<double>(episodes.size());
    s.kills /= n;
    s.deaths /= n;
    s.shots /= n;
    s.hits /= n;
    s.damage /= n;
    s.objective_ticks /= n;
    if (tbk_n > 0) {
        s.time_between_kills = tbk / tbk_n;
    }
    return s;
}

std::uint64_t episode_seed(const EvalConfig& config, std::size_t scenario, int episode) {
    return derive_seed(derive_seed(config.seed, config.scenarios.at(scenario).name),
                       static_cast<std::uint64_t>(episode));
}

Evaluation evaluate_tree(const dsl::BtNode& tree, const EvalConfig& config) {
    if (config.scenarios.empty() || config.episodes < 1) {
        throw Error("bad-config", "evaluation needs at least one scenario and one episode");
    }
    const bool want_tactical = config.tactical || config.objective.needs_tactical();
    const auto policy = fps::compile_shooter(tree, config.weights);
    Evaluation out;
    std::vector<arena::GameMetrics> metrics;
    std::vector<TacticalReport> reports;
    double sum = 0.0;
    int defined = 0;
    for (std::size_t s = 0; s < config.scenarios.size(); ++s) {
        const auto& scenario = config.scenarios[s];
        for (int e = 0; e < config.episodes; ++e) {
            const auto result = fps::run_scenario(scenario, policy, episode_seed(config, s, e));
            out.trace_hashes.push_back(arena::trace_hash(result.trace));
            std::optional<TacticalReport> report;
            if (want_tactical) {
                report = tactical_analysis(result.trace, 0);
                reports.push_back(*report);
            }
            const auto v = objective_value(config.objective, result.metrics, 0, scenario.rules,
                                           report ? &*report : nullptr);
            if (v) {
                sum += *v;
                ++defined;
            } else {
                ++out.undefined_episodes;
            }
            metrics.push_back(result.metrics);
        }
    }
    out.summary = summarize(metrics);
    if (defined == 0) {
        out.fallback = true;
        out.reward = fallback_reward(out.summary.kills, out.summary.damage);
    } else {
        out.reward = sum / static_cast<double>(metrics.size());
    }
    if (want_tactical) {
        out.tactical = average(reports);
    }
    return out;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
    std::vector<std::exception_ptr> errors(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

std::vector<Evaluation> evaluate_many(std::span<const dsl::BtNode> trees, const EvalConfig& config, int jobs) {
    std::vector<Evaluation> out(trees.size());
    parallel_for(trees.size(), jobs, [&](std::size_t i) { out[i] = evaluate_tree(trees[i], config); });
    return out;
}

}  // namespace bta::search
