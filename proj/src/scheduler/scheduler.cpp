#include "bta/scheduler/scheduler.hpp"

#include <algorithm>

#include "bta/core/error.hpp"
#include "bta/fps/match.hpp"

namespace bta::scheduler {

void SwitchPolicy::check() const {
    if (review_period < 1) {
        throw Error("bad-config", "review period must be >= 1 tick");
    }
}

int select(const neural::NetParams& params, std::size_t library_size, const Features& features) {
    if (library_size == 1) {
        return 0;
    }
    if (params.output_size() != static_cast<int>(library_size)) {
        throw Error("dim-mismatch", "scheduler has " + std::to_string(params.output_size()) + " outputs for a library of " +
                                        std::to_string(library_size));
    }
    // logits() checks the input width.
    const auto z = neural::logits(params, features);
    return neural::argmax(z);
}

SelectFn net_selector(std::shared_ptr<const neural::NetParams> params, std::size_t library_size) {
    return [params = std::move(params), library_size](const arena::Observation& obs) {
        return select(*params, library_size, scheduler_features(obs));
    };
}

SchedulerAgent::SchedulerAgent(std::vector<btree::CompiledPolicy> options, SelectFn selector, SwitchPolicy policy,
                               int agent_id)
    : selector_(std::move(selector)), policy_(policy), agent_id_(agent_id) {
    policy_.check();
    if (options.empty()) {
        throw Error("bad-library", "scheduler needs at least one option");
    }
    for (auto& o : options) {
        options_.emplace_back(std::move(o));
    }
    ticks_.assign(options_.size(), 0);
}

void SchedulerAgent::on_episode_start(std::uint64_t seed) {
    for (auto& o : options_) {
        o.on_episode_start(seed);
    }
    current_ = -1;
    reselect_ = true;
    selections_ = 0;
    switches_.clear();
    std::fill(ticks_.begin(), ticks_.end(), 0);
}

arena::Action SchedulerAgent::act(const arena::Observation& obs) {
    if (reselect_ || obs.tick % policy_.review_period == 0) {
        const int choice = selector_(obs);
        if (choice < 0 || choice >= static_cast<int>(options_.size())) {
            throw Error("bad-selection", "selector returned " + std::to_string(choice));
        }
        ++selections_;
        if (choice != current_) {
            if (current_ >= 0) {
                options_[static_cast<std::size_t>(current_)].on_death();  // resets policy and blackboard
                switches_.push_back({obs.tick, agent_id_ >= 0 ? agent_id_ : obs.agent_id, current_, choice});
            }
            current_ = choice;
        }
        reselect_ = false;
    }
    auto& option = options_[static_cast<std::size_t>(current_)];
    const auto action = option.act(obs);
    ++ticks_[static_cast<std::size_t>(current_)];
    reselect_ = option.last_status() != btree::TickStatus::Running;
    return action;
}

void SchedulerAgent::on_death() {
    if (current_ >= 0) {
        options_[static_cast<std::size_t>(current_)].on_death();
    }
    reselect_ = true;
}

std::vector<std::string> SchedulerAgent::take_diagnostics() {
    std::vector<std::string> out;
    for (auto& o : options_) {
        auto d = o.take_diagnostics();
        out.insert(out.end(), d.begin(), d.end());
    }
    return out;
}

int SchedulerAgent::dominant() const {
    if (selections_ == 0) {
        return -1;
    }
    return static_cast<int>(std::max_element(ticks_.begin(), ticks_.end()) - ticks_.begin());
}

ScheduledEpisode run_scheduled_episode(const fps::Scenario& scenario, const std::vector<btree::CompiledPolicy>& library,
                                       const SelectFn& selector, const SwitchPolicy& policy, std::uint64_t seed,
                                       bool record_trace) {
    std::vector<std::unique_ptr<SchedulerAgent>> agents;
    std::vector<arena::AgentController*> team0;
    for (int i = 0; i < scenario.team_sizes[0]; ++i) {
        std::vector<btree::CompiledPolicy> options;
        for (const auto& p : library) {
            options.push_back(p.clone());
        }
        agents.push_back(std::make_unique<SchedulerAgent>(std::move(options), selector, policy, i));
        team0.push_back(agents.back().get());
    }
    ScheduledEpisode out;
    out.episode = fps::run_scenario(scenario, team0, seed, record_trace);
    for (const auto& a : agents) {
        out.switches.insert(out.switches.end(), a->switches().begin(), a->switches().end());
        out.selections += a->selections();
        out.dominant.push_back(a->dominant());
    }
    std::stable_sort(out.switches.begin(), out.switches.end(),
                     [](const SwitchEvent& a, const SwitchEvent& b) { return a.tick < b.tick; });
    return out;
}

}  // namespace bta::scheduler
