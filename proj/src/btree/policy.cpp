#include "bta/btree/policy.hpp"

#include "bta/core/error.hpp"
#include "bta/dsl/validate.hpp"

namespace bta::btree {

std::string_view to_string(TickStatus s) {
    switch (s) {
        case TickStatus::Success: return "success";
        case TickStatus::Failure: return "failure";
        case TickStatus::Running: return "running";
    }
    return "?";
}

void Bindings::bind_condition(const std::string& key, ConditionHandler handler) {
    conditions_[key] = std::move(handler);
}

void Bindings::bind_rule(const std::string& key, RuleTask handler) {
    neural_.erase(key);
    rules_[key] = std::move(handler);
}

void Bindings::bind_neural(const std::string& key, NeuralTask task) {
    if (!task.params || !task.encode || !task.decode) {
        throw Error("bad-binding", "neural task '" + key + "' needs params, encode and decode");
    }
    rules_.erase(key);
    neural_[key] = std::move(task);
}

const ConditionHandler* Bindings::condition(const std::string& key) const {
    const auto it = conditions_.find(key);
    return it == conditions_.end() ? nullptr : &it->second;
}

const RuleTask* Bindings::rule(const std::string& key) const {
    const auto it = rules_.find(key);
    return it == rules_.end() ? nullptr : &it->second;
}

const NeuralTask* Bindings::neural(const std::string& key) const {
    const auto it = neural_.find(key);
    return it == neural_.end() ? nullptr : &it->second;
}

CompiledPolicy CompiledPolicy::compile(const dsl::BtNode& tree, const dsl::NodeCatalog& catalog,
                                       const Bindings& bindings, CompileOptions options) {
    const auto diags = dsl::validate(tree, catalog);
    for (const auto& d : diags) {
        if (d.severity == dsl::Severity::Error) {
            throw Error("invalid-tree", dsl::format_diagnostic(d));
        }
    }
    CompiledPolicy p;
    p.tree_ = std::make_shared<const dsl::BtNode>(tree);
    p.options_ = options;
    p.add(*p.tree_, bindings);
    p.state_.assign(p.nodes_.size(), State{});
    return p;
}

int CompiledPolicy::add(const dsl::BtNode& n, const Bindings& bindings) {
    const int id = static_cast<int>(nodes_.size());
    Node fresh;
    fresh.kind = n.kind;
    nodes_.push_back(std::move(fresh));
    switch (n.kind) {
        case dsl::NodeKind::Selector:
        case dsl::NodeKind::Sequence: {
            std::vector<int> children;
            for (const auto& c : n.children) {
                children.push_back(add(c, bindings));
            }
            nodes_[static_cast<std::size_t>(id)].children = std::move(children);
            break;
        }
        case dsl::NodeKind::Condition: {
            const auto* h = bindings.condition(n.key);
            if (h == nullptr) {
                throw Error("unbound-handler", "no handler bound for condition '" + n.key + "'");
            }
            auto& node = nodes_[static_cast<std::size_t>(id)];
            node.handler = HandlerKind::Condition;
            node.key = n.key;
            node.negated = n.negated;
            node.condition = *h;
            break;
        }
        case dsl::NodeKind::Task: {
            auto& node = nodes_[static_cast<std::size_t>(id)];
            node.key = n.action;
            node.param = n.param;
            if (const auto* r = bindings.rule(n.action)) {
                node.handler = HandlerKind::Rule;
                node.rule = *r;
            } else if (const auto* nt = bindings.neural(n.action)) {
                node.handler = HandlerKind::Neural;
                node.neural = *nt;
            } else {
                throw Error("unbound-handler", "no handler bound for task '" + n.action + "'");
            }
            break;
        }
    }
    return id;
}

HandlerKind CompiledPolicy::handler_kind(int node_id) const { return nodes_.at(static_cast<std::size_t>(node_id)).handler; }

CompiledPolicy CompiledPolicy::clone() const {
    CompiledPolicy copy = *this;
    copy.state_.assign(nodes_.size(), State{});
    copy.emitted_.reset();
    copy.diagnostics_.clear();
    return copy;
}

std::vector<std::string> CompiledPolicy::take_diagnostics() {
    auto out = std::move(diagnostics_);
    diagnostics_.clear();
    return out;
}

std::string CompiledPolicy::scope_of(int id) { return "node." + std::to_string(id) + "."; }

void CompiledPolicy::reset(Blackboard& bb) {
    state_.assign(nodes_.size(), State{});
    emitted_.reset();
    bb.clear();
}

TickResult CompiledPolicy::tick(const arena::Observation& obs, Blackboard& bb) {
    emitted_.reset();
    TickResult r;
    r.status = tick_node(0, obs, bb);
    r.action = emitted_;
    if (r.status == TickStatus::Running && !r.action) {
        r.action = arena::Action::wait();
    }
    return r;
}

TickStatus CompiledPolicy::tick_node(int id, const arena::Observation& obs, Blackboard& bb) {
    const auto& node = nodes_[static_cast<std::size_t>(id)];
    auto& st = state_[static_cast<std::size_t>(id)];
    switch (node.kind) {
        case dsl::NodeKind::Sequence: {
            for (auto i = static_cast<std::size_t>(st.cursor); i < node.children.size(); ++i) {
                const auto s = tick_node(node.children[i], obs, bb);
                if (s == TickStatus::Running) {
                    st.cursor = static_cast<int>(i);
                    return s;
                }
                if (s == TickStatus::Failure) {
                    st.cursor = 0;
                    return s;
                }
            }
            st.cursor = 0;
            return TickStatus::Success;
        }
        case dsl::NodeKind::Selector: {
            for (std::size_t i = 0; i < node.children.size(); ++i) {
                const auto s = tick_node(node.children[i], obs, bb);
                if (s == TickStatus::Failure) {
                    continue;
                }
                if (st.running_child >= 0 && st.running_child != static_cast<int>(i)) {
                    halt(node.children[static_cast<std::size_t>(st.running_child)], bb);
                }
                st.running_child = s == TickStatus::Running ? static_cast<int>(i) : -1;
                return s;
            }
            st.running_child = -1;
            return TickStatus::Failure;
        }
        case dsl::NodeKind::Condition: {
            try {
                const bool v = node.condition(obs, bb);
                return (v != node.negated) ? TickStatus::Success : TickStatus::Failure;
            } catch (const std::exception& e) {
                diagnostics_.push_back("runtime-error: condition '" + node.key + "' (node " + std::to_string(id) +
                                       "): " + e.what());
                return TickStatus::Failure;
            }
        }
        case dsl::NodeKind::Task: {
            TickStatus s = TickStatus::Failure;
            try {
                s = tick_task(id, obs, bb);
            } catch (const std::exception& e) {
                diagnostics_.push_back("runtime-error: task '" + node.key + "' (node " + std::to_string(id) +
                                       "): " + e.what());
                s = TickStatus::Failure;
            }
            st.running = s == TickStatus::Running;
            if (!st.running) {
                bb.erase_prefix(scope_of(id));
            }
            return s;
        }
    }
    return TickStatus::Failure;
}

TickStatus CompiledPolicy::tick_task(int id, const arena::Observation& obs, Blackboard& bb) {
    const auto& node = nodes_[static_cast<std::size_t>(id)];
    TaskCall call{obs, bb, node.param, id, !state_[static_cast<std::size_t>(id)].running, scope_of(id), rng_};
    if (node.handler == HandlerKind::Rule) {
        auto r = node.rule(call);
        if (r.action) {
            emitted_ = r.action;
        }
        return r.status;
    }
    const auto& task = node.neural;
    if (task.done && task.done(call)) {
        return TickStatus::Success;
    }
    const auto x = task.encode(call);
    if (!x) {
        return TickStatus::Failure;
    }
    const auto legal = task.legal ? task.legal(call) : std::vector<bool>{};
    const auto probs = neural::forward(*task.params, *x, legal);
    const int verb = options_.deterministic ? neural::argmax(probs) : neural::sample(probs, rng_);
    emitted_ = task.decode(verb, call);
    return TickStatus::Running;
}

void CompiledPolicy::halt(int id, Blackboard& bb) {
    state_[static_cast<std::size_t>(id)] = State{};
    const auto& node = nodes_[static_cast<std::size_t>(id)];
    if (node.kind == dsl::NodeKind::Task) {
        bb.erase_prefix(scope_of(id));
    }
    for (int c : node.children) {
        halt(c, bb);
    }
}

void PolicyAgent::on_episode_start(std::uint64_t seed) {
    policy_.reset(bb_);
    policy_.seed(seed);
}

arena::Action PolicyAgent::act(const arena::Observation& obs) {
    const auto r = policy_.tick(obs, bb_);
    last_status_ = r.status;
    return r.action.value_or(arena::Action::wait());
}

void PolicyAgent::on_death() { policy_.reset(bb_); }

}  // namespace bta::btree
