#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "bta/arena/action.hpp"
#include "bta/btree/policy.hpp"
#include "bta/core/rng.hpp"
#include "bta/dsl/ast.hpp"
#include "bta/fps/catalog.hpp"

namespace bta::testing {

using arena::Action;

// Scripted handlers: conditions read a truth table through obs.facts, tasks
// return a status from a per-node table and emit a constant action unless
// they fail.
struct Script {
    std::map<std::string, btree::TickStatus> task_status;

    static std::string task_key(const std::string& action, const std::optional<std::string>& param, int node_id) {
        return action + ":" + param.value_or("") + ":" + std::to_string(node_id);
    }
    static Action task_action(int node_id) { return Action::move(node_id % arena::kDirectionCount); }
};

inline btree::Bindings scripted_bindings(const std::shared_ptr<Script>& script) {
    btree::Bindings b;
    const auto catalog = fps::shooter_catalog();
    for (const auto& c : catalog.conditions()) {
        b.bind_condition(c.key, [key = c.key](const arena::Observation& obs, const btree::Blackboard&) {
            return obs.facts.at(key);
        });
    }
    for (const auto& a : catalog.actions()) {
        b.bind_rule(a.key, [script, key = a.key](btree::TaskCall& call) {
            btree::TaskResult r;
            r.status = script->task_status.at(Script::task_key(key, call.param, call.node_id));
            if (r.status != btree::TickStatus::Failure) {
                r.action = Script::task_action(call.node_id);
            }
            return r;
        });
    }
    return b;
}

// Straight recursion over the tree. Sequence cursors and selector bookmarks
// are kept per node address; halting a subtree clears them.
class Reference {
public:
    Reference(const dsl::BtNode& root, std::shared_ptr<Script> script) : root_(root), script_(std::move(script)) {}

    std::pair<btree::TickStatus, std::optional<Action>> tick(const std::map<std::string, bool>& facts) {
        facts_ = &facts;
        action_.reset();
        next_id_ = 0;
        ids_.clear();
        number(root_);
        const auto s = eval(root_);
        auto a = action_;
        if (s == btree::TickStatus::Running && !a) {
            a = Action::wait();
        }
        return {s, a};
    }

private:
    void number(const dsl::BtNode& n) {
        ids_[&n] = next_id_++;
        for (const auto& c : n.children) {
            number(c);
        }
    }

    void halt(const dsl::BtNode& n) {
        cursor_.erase(&n);
        running_.erase(&n);
        for (const auto& c : n.children) {
            halt(c);
        }
    }

    btree::TickStatus eval(const dsl::BtNode& n) {
        switch (n.kind) {
            case dsl::NodeKind::Condition:
                return facts_->at(n.key) != n.negated ? btree::TickStatus::Success : btree::TickStatus::Failure;
            case dsl::NodeKind::Task: {
                const int id = ids_.at(&n);
                const auto s = script_->task_status.at(Script::task_key(n.action, n.param, id));
                if (s != btree::TickStatus::Failure) {
                    action_ = Script::task_action(id);
                }
                return s;
            }
            case dsl::NodeKind::Sequence: {
                const std::size_t start = cursor_.count(&n) ? cursor_[&n] : 0;
                cursor_.erase(&n);
                for (std::size_t i = start; i < n.children.size(); ++i) {
                    const auto s = eval(n.children[i]);
                    if (s == btree::TickStatus::Failure) {
                        return s;
                    }
                    if (s == btree::TickStatus::Running) {
                        cursor_[&n] = i;
                        return s;
                    }
                }
                return btree::TickStatus::Success;
            }
            case dsl::NodeKind::Selector: {
                const int prev = running_.count(&n) ? static_cast<int>(running_[&n]) : -1;
                running_.erase(&n);
                for (std::size_t i = 0; i < n.children.size(); ++i) {
                    const auto s = eval(n.children[i]);
                    if (s == btree::TickStatus::Failure) {
                        continue;
                    }
                    if (prev >= 0 && static_cast<std::size_t>(prev) != i) {
                        halt(n.children[static_cast<std::size_t>(prev)]);
                    }
                    if (s == btree::TickStatus::Running) {
                        running_[&n] = i;
                    }
                    return s;
                }
                return btree::TickStatus::Failure;
            }
        }
        return btree::TickStatus::Failure;
    }

    const dsl::BtNode& root_;
    std::shared_ptr<Script> script_;
    const std::map<std::string, bool>* facts_ = nullptr;
    std::optional<Action> action_;
    std::map<const dsl::BtNode*, int> ids_;
    int next_id_ = 0;
    std::map<const dsl::BtNode*, std::size_t> cursor_;
    std::map<const dsl::BtNode*, std::size_t> running_;
};

inline void script_tasks(const dsl::BtNode& n, Script& script, Rng& rng, int& id) {
    const int my_id = id++;
    if (n.kind == dsl::NodeKind::Task) {
        const btree::TickStatus options[] = {btree::TickStatus::Success, btree::TickStatus::Failure, btree::TickStatus::Running};
        script.task_status[Script::task_key(n.action, n.param, my_id)] = options[uniform_index(rng, 3)];
    }
    for (const auto& c : n.children) {
        script_tasks(c, script, rng, id);
    }
}

inline std::map<std::string, bool> random_facts(Rng& rng) {
    std::map<std::string, bool> facts;
    static const auto catalog = fps::shooter_catalog();
    for (const auto& c : catalog.conditions()) {
        facts[c.key] = bernoulli(rng, 0.5);
    }
    return facts;
}

}  // namespace bta::testing
