#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "bta/arena/episode.hpp"
#include "bta/btree/policy.hpp"
#include "bta/fps/scenarios.hpp"
#include "bta/neural/net.hpp"
#include "bta/scheduler/features.hpp"

namespace bta::scheduler {

struct SwitchPolicy {
    int review_period = 25;  // M, in ticks

    // Throws bta::Error("bad-config") for M < 1.
    void check() const;
};

struct SwitchEvent {
    int tick = 0;
    int agent = -1;
    int from = -1;
    int to = -1;

    bool operator==(const SwitchEvent&) const = default;
};

// Observation -> library index.
using SelectFn = std::function<int(const arena::Observation&)>;

// argmax of the scheduler net, lowest index on ties. Throws
// bta::Error("dim-mismatch") when the net does not match the features or the
// library size.
int select(const neural::NetParams& params, std::size_t library_size, const Features& features);

SelectFn net_selector(std::shared_ptr<const neural::NetParams> params, std::size_t library_size);

// Runs one library tree at a time. A new choice is made on the first tick,
// after the running tree finishes at the root, and on every tick divisible by
// the review period; a changed choice resets the outgoing tree.
class SchedulerAgent : public arena::AgentController {
public:
    SchedulerAgent(std::vector<btree::CompiledPolicy> options, SelectFn selector, SwitchPolicy policy,
                   int agent_id = -1);

    void on_episode_start(std::uint64_t seed) override;
    arena::Action act(const arena::Observation& obs) override;
    void on_death() override;
    std::vector<std::string> take_diagnostics() override;

    int current() const { return current_; }
    int selections() const { return selections_; }
    const std::vector<SwitchEvent>& switches() const { return switches_; }
    // Ticks spent running each option.
    const std::vector<int>& ticks_per_option() const { return ticks_; }
    // Index that ran the most ticks (lowest on ties), or -1.
    int dominant() const;

private:
    std::vector<btree::PolicyAgent> options_;
    SelectFn selector_;
    SwitchPolicy policy_;
    int agent_id_;
    int current_ = -1;
    bool reselect_ = true;
    int selections_ = 0;
    std::vector<SwitchEvent> switches_;
    std::vector<int> ticks_;
};

struct ScheduledEpisode {
    arena::EpisodeResult episode;
    std::vector<SwitchEvent> switches;  // all team-0 agents, in tick order
    int selections = 0;
    std::vector<int> dominant;  // per team-0 agent
};

ScheduledEpisode run_scheduled_episode(const fps::Scenario& scenario, const std::vector<btree::CompiledPolicy>& library,
                                       const SelectFn& selector, const SwitchPolicy& policy, std::uint64_t seed,
                                       bool record_trace = true);

}  // namespace bta::scheduler
