#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bta/arena/action.hpp"
#include "bta/arena/episode.hpp"
#include "bta/arena/observation.hpp"
#include "bta/btree/blackboard.hpp"
#include "bta/core/rng.hpp"
#include "bta/dsl/ast.hpp"
#include "bta/dsl/catalog.hpp"
#include "bta/neural/features.hpp"
#include "bta/neural/net.hpp"

namespace bta::btree {

enum class TickStatus { Success, Failure, Running };

std::string_view to_string(TickStatus s);

// Everything a task handler may look at or touch during one tick.
struct TaskCall {
    const arena::Observation& obs;
    Blackboard& bb;
    const std::optional<std::string>& param;
    int node_id;
    bool first_tick;    // not resumed from Running
    std::string scope;  // blackboard key prefix owned by this node
    Rng& rng;
};

struct TaskResult {
    TickStatus status = TickStatus::Success;
    std::optional<arena::Action> action;
};

// Conditions see the blackboard read-only.
using ConditionHandler = std::function<bool(const arena::Observation&, const Blackboard&)>;
using RuleTask = std::function<TaskResult(TaskCall&)>;

// Learned task: encode the observation, pick a verb from the net's
// distribution, translate it into an arena action.
struct NeuralTask {
    std::shared_ptr<const neural::NetParams> params;
    // nullopt means the task cannot run (e.g. no target) and fails.
    std::function<std::optional<neural::TaskObservation>(TaskCall&)> encode;
    std::function<std::vector<bool>(TaskCall&)> legal;  // optional mask
    std::function<arena::Action(int verb, TaskCall&)> decode;
    // Checked before acting; true completes the task with Success.
    std::function<bool(TaskCall&)> done;
};

class Bindings {
public:
    void bind_condition(const std::string& key, ConditionHandler handler);
    void bind_rule(const std::string& key, RuleTask handler);
    void bind_neural(const std::string& key, NeuralTask task);

    const ConditionHandler* condition(const std::string& key) const;
    const RuleTask* rule(const std::string& key) const;
    const NeuralTask* neural(const std::string& key) const;

private:
    std::map<std::string, ConditionHandler> conditions_;
    std::map<std::string, RuleTask> rules_;
    std::map<std::string, NeuralTask> neural_;
};

struct CompileOptions {
    // argmax over neural distributions instead of seeded sampling
    bool deterministic = true;
};

struct TickResult {
    TickStatus status = TickStatus::Failure;
    std::optional<arena::Action> action;
};

enum class HandlerKind { Composite, Condition, Rule, Neural };

class CompiledPolicy {
public:
    // Throws bta::Error("invalid-tree") when validation reports errors and
    // ("unbound-handler") when a referenced key has no binding.
    static CompiledPolicy compile(const dsl::BtNode& tree, const dsl::NodeCatalog& catalog, const Bindings& bindings,
                                  CompileOptions options = {});

    TickResult tick(const arena::Observation& obs, Blackboard& bb);
    // Back to the first-tick state; clears the blackboard.
    void reset(Blackboard& bb);
    void seed(std::uint64_t seed) { rng_.seed(seed); }

    const dsl::BtNode& structure() const { return *tree_; }
    std::size_t node_count() const { return nodes_.size(); }
    HandlerKind handler_kind(int node_id) const;
    // Copy with fresh runtime state; the structure is shared.
    CompiledPolicy clone() const;

    const std::vector<std::string>& diagnostics() const { return diagnostics_; }
    std::vector<std::string> take_diagnostics();

private:
    struct Node {
        dsl::NodeKind kind = dsl::NodeKind::Selector;
        HandlerKind handler = HandlerKind::Composite;
        std::vector<int> children;
        bool negated = false;
        std::string key;
        std::optional<std::string> param;
        ConditionHandler condition;
        RuleTask rule;
        NeuralTask neural;
    };
    struct State {
        int cursor = 0;         // Sequence: child to resume
        int running_child = -1; // Selector: child that returned Running last tick
        bool running = false;   // Task
    };

    CompiledPolicy() = default;
    int add(const dsl::BtNode& n, const Bindings& bindings);
    TickStatus tick_node(int id, const arena::Observation& obs, Blackboard& bb);
    TickStatus tick_task(int id, const arena::Observation& obs, Blackboard& bb);
    void halt(int id, Blackboard& bb);
    static std::string scope_of(int id);

    std::shared_ptr<const dsl::BtNode> tree_;
    std::vector<Node> nodes_;
    std::vector<State> state_;
    CompileOptions options_;
    Rng rng_;
    std::optional<arena::Action> emitted_;
    std::vector<std::string> diagnostics_;
};

// Drives one arena agent with a compiled policy and its own blackboard.
class PolicyAgent : public arena::AgentController {
public:
    explicit PolicyAgent(CompiledPolicy policy) : policy_(std::move(policy)) {}

    void on_episode_start(std::uint64_t seed) override;
    arena::Action act(const arena::Observation& obs) override;
    void on_death() override;
    std::vector<std::string> take_diagnostics() override { return policy_.take_diagnostics(); }

    CompiledPolicy& policy() { return policy_; }
    const Blackboard& blackboard() const { return bb_; }
    TickStatus last_status() const { return last_status_; }

private:
    CompiledPolicy policy_;
    Blackboard bb_;
    TickStatus last_status_ = TickStatus::Failure;
};

}  // namespace bta::btree
