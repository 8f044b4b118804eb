#pragma once

#include <memory>
#include <optional>
#include <string>

#include "bta/btree/policy.hpp"
#include "bta/neural/net.hpp"

namespace bta::fps {

// Learned parameters for task nodes; a null entry falls back to the
// rule-based implementation of that task.
struct TaskWeights {
    std::shared_ptr<const neural::NetParams> move_to;
    std::shared_ptr<const neural::NetParams> shoot;

    // Digest of the loaded parameters ("rule" for absent entries).
    std::string fingerprint() const;
};

// Reads move_to.pnet / shoot.pnet from `dir` when present.
TaskWeights load_task_weights(const std::string& dir);

btree::Bindings shooter_bindings(const TaskWeights& weights = {});

// Destination of a move_to call for its param, or nullopt when unknown.
std::optional<Vec2> resolve_destination(btree::TaskCall& call);

enum class Engagement { Active, Lost, Killed, Failed };

struct TargetTrack {
    Engagement state = Engagement::Failed;
    int target = -1;
    Vec2 last_seen;
};

inline constexpr int kTargetLostTicks = 5;

// Target bookkeeping shared by the rule and neural shoot tasks.
TargetTrack track_target(btree::TaskCall& call);

inline constexpr double kArrivalRadius = 0.5;

}  // namespace bta::fps
