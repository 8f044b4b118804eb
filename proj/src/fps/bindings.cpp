#include "bta/fps/bindings.hpp"

#include <algorithm>
#include <filesystem>

#include "bta/arena/navigation.hpp"
#include "bta/core/error.hpp"
#include "bta/core/hash.hpp"
#include "bta/neural/features.hpp"
#include "bta/neural/serialize.hpp"
#include "bta/neural/train.hpp"

namespace bta::fps {

using arena::Action;
using arena::Observation;
using btree::EntityId;
using btree::TaskCall;
using btree::TaskResult;
using btree::TickCounter;
using btree::TickStatus;

std::string TaskWeights::fingerprint() const {
    auto one = [](const std::shared_ptr<const neural::NetParams>& p) {
        return p ? hex64(fnv1a64(std::span<const std::uint8_t>(neural::save_params(*p)))) : std::string("rule");
    };
    return "move_to=" + one(move_to) + ",shoot=" + one(shoot);
}

TaskWeights load_task_weights(const std::string& dir) {
    TaskWeights w;
    const std::filesystem::path root(dir);
    if (std::filesystem::exists(root / "move_to.pnet")) {
        w.move_to = std::make_shared<const neural::NetParams>(neural::load_params_file((root / "move_to.pnet").string()));
    }
    if (std::filesystem::exists(root / "shoot.pnet")) {
        w.shoot = std::make_shared<const neural::NetParams>(neural::load_params_file((root / "shoot.pnet").string()));
    }
    return w;
}

namespace {

const std::string& param_or_empty(const TaskCall& call) {
    static const std::string kEmpty;
    return call.param ? *call.param : kEmpty;
}

std::optional<int> pick_target(TaskCall& call) {
    const auto& seen = call.obs.visible_enemies;
    if (seen.empty()) {
        return std::nullopt;
    }
    const auto& p = param_or_empty(call);
    if (p == "random_enemy_in_view") {
        return seen[uniform_index(call.rng, seen.size())].id;
    }
    if (p == "weakest_enemy_in_view") {
        // visible_enemies is sorted nearest first, so ties go to the nearer one
        return std::min_element(seen.begin(), seen.end(),
                                [](const auto& a, const auto& b) { return a.health < b.health; })
            ->id;
    }
    return seen.front().id;
}

const arena::SeenAgent* find_visible(const Observation& obs, int id) {
    for (const auto& e : obs.visible_enemies) {
        if (e.id == id) {
            return &e;
        }
    }
    return nullptr;
}

int lattice_direction(const arena::MapSpec& map, Vec2 from, Vec2 goal) {
    const arena::DistanceField field(map, goal, kArrivalRadius);
    return field.best_direction(map, from);
}

TaskResult rule_shoot(TaskCall& call) {
    const auto track = track_target(call);
    switch (track.state) {
        case Engagement::Killed: return {TickStatus::Success, std::nullopt};
        case Engagement::Failed: return {TickStatus::Failure, std::nullopt};
        case Engagement::Lost: return {TickStatus::Running, Action::wait()};
        case Engagement::Active: break;
    }
    if (call.obs.aim_target != track.target) {
        return {TickStatus::Running, Action::aim(track.target)};
    }
    if (call.obs.ammo <= 0) {
        return {TickStatus::Failure, std::nullopt};
    }
    return {TickStatus::Running, Action::fire()};
}

TaskResult rule_move_to(TaskCall& call) {
    const auto goal = resolve_destination(call);
    if (!goal) {
        return {TickStatus::Failure, std::nullopt};
    }
    if (distance(call.obs.position, *goal) <= kArrivalRadius) {
        return {TickStatus::Success, std::nullopt};
    }
    const int dir = lattice_direction(*call.obs.map, call.obs.position, *goal);
    if (dir < 0) {
        return {TickStatus::Failure, std::nullopt};
    }
    return {TickStatus::Running, Action::move(dir)};
}

TaskResult rule_retreat(TaskCall& call) {
    const auto& obs = call.obs;
    if (obs.visible_enemies.empty()) {
        return {TickStatus::Success, std::nullopt};
    }
    const Vec2 threat = obs.visible_enemies.front().position;
    int best = -1;
    double best_d = distance(obs.position, threat);
    for (int d = 0; d < arena::kDirectionCount; ++d) {
        const auto next = arena::try_move(*obs.map, obs.position, d);
        if (next && distance(*next, threat) > best_d + 1e-12) {
            best_d = distance(*next, threat);
            best = d;
        }
    }
    return {TickStatus::Running, best < 0 ? Action::wait() : Action::move(best)};
}

TaskResult rule_patrol(TaskCall& call) {
    const auto& obs = call.obs;
    const auto& map = *obs.map;
    const std::string key = call.scope + "goal";
    for (int attempt = 0; attempt < 32; ++attempt) {
        if (!call.bb.has(key) || distance(obs.position, call.bb.get<Vec2>(key)) <= kArrivalRadius) {
            const arena::Cell c{static_cast<int>(uniform_index(call.rng, static_cast<std::size_t>(map.width()))),
                                static_cast<int>(uniform_index(call.rng, static_cast<std::size_t>(map.height())))};
            if (map.blocked(c)) {
                continue;
            }
            call.bb.set(key, arena::cell_center(c));
        }
        const int dir = lattice_direction(map, obs.position, call.bb.get<Vec2>(key));
        if (dir >= 0) {
            return {TickStatus::Running, Action::move(dir)};
        }
        call.bb.erase(key);
    }
    return {TickStatus::Running, Action::wait()};
}

btree::NeuralTask neural_move_to(std::shared_ptr<const neural::NetParams> params) {
    btree::NeuralTask t;
    t.params = std::move(params);
    t.done = [](TaskCall& call) {
        const auto goal = resolve_destination(call);
        return goal && distance(call.obs.position, *goal) <= kArrivalRadius;
    };
    t.encode = [](TaskCall& call) -> std::optional<neural::TaskObservation> {
        const auto goal = resolve_destination(call);
        if (!goal) {
            return std::nullopt;
        }
        return neural::encode_task_observation(*call.obs.map, call.obs.position, call.obs.facing, *goal);
    };
    t.legal = [](TaskCall& call) { return neural::move_legality(*call.obs.map, call.obs.position); };
    t.decode = [](int verb, TaskCall&) {
        return verb >= 0 && verb < arena::kDirectionCount ? Action::move(verb) : Action::wait();
    };
    return t;
}

btree::NeuralTask neural_shoot(std::shared_ptr<const neural::NetParams> params) {
    const auto state_key = [](const TaskCall& call) { return call.scope + "engagement"; };
    btree::NeuralTask t;
    t.params = std::move(params);
    t.done = [state_key](TaskCall& call) {
        const auto track = track_target(call);
        call.bb.set(state_key(call), static_cast<double>(static_cast<int>(track.state)));
        return track.state == Engagement::Killed;
    };
    t.encode = [state_key](TaskCall& call) -> std::optional<neural::TaskObservation> {
        const auto state = static_cast<Engagement>(static_cast<int>(call.bb.get<double>(state_key(call))));
        if (state == Engagement::Failed) {
            return std::nullopt;
        }
        const Vec2 target = call.bb.get<Vec2>(call.scope + "last_seen");
        return neural::encode_task_observation(*call.obs.map, call.obs.position, call.obs.facing, target);
    };
    t.legal = [](TaskCall& call) {
        return neural::shoot_legality(call.obs, call.bb.get<EntityId>(call.scope + "target").id);
    };
    t.decode = [](int verb, TaskCall& call) {
        if (verb == neural::kShootAim) {
            return Action::aim(call.bb.get<EntityId>(call.scope + "target").id);
        }
        return verb == neural::kShootFire ? Action::fire() : Action::wait();
    };
    return t;
}

}  // namespace

std::optional<Vec2> resolve_destination(TaskCall& call) {
    const auto& obs = call.obs;
    const auto& p = param_or_empty(call);
    if (p == "objective") {
        return obs.nearest_objective;
    }
    if (p == "home") {
        return obs.home;
    }
    if (p == "teammate") {
        if (obs.teammates.empty()) {
            return std::nullopt;
        }
        return obs.teammates.front().position;
    }
    const auto& known = obs.known_enemy_locations;
    if (known.empty()) {
        return std::nullopt;
    }
    if (p == "nearest_enemy_location") {
        const auto it = std::min_element(known.begin(), known.end(), [&](const auto& a, const auto& b) {
            return distance(obs.position, a.position) < distance(obs.position, b.position);
        });
        return it->position;
    }
    // random_enemy_location: stick with one enemy for the life of the task
    const std::string key = call.scope + "enemy";
    if (call.bb.has(key)) {
        const int id = call.bb.get<EntityId>(key).id;
        for (const auto& k : known) {
            if (k.enemy_id == id) {
                return k.position;
            }
        }
    }
    const auto& chosen = known[uniform_index(call.rng, known.size())];
    call.bb.set(key, EntityId{chosen.enemy_id});
    return chosen.position;
}

TargetTrack track_target(TaskCall& call) {
    const auto& obs = call.obs;
    const std::string target_key = call.scope + "target";
    const std::string lost_key = call.scope + "lost";
    const std::string seen_key = call.scope + "last_seen";
    TargetTrack out;

    auto acquire = [&]() {
        const auto pick = pick_target(call);
        if (!pick) {
            out.state = Engagement::Failed;
            return;
        }
        call.bb.set(target_key, EntityId{*pick});
        call.bb.set(lost_key, TickCounter{0});
        call.bb.set(seen_key, find_visible(obs, *pick)->position);
        out = {Engagement::Active, *pick, find_visible(obs, *pick)->position};
    };

    if (!call.bb.has(target_key)) {
        acquire();
        return out;
    }
    const int target = call.bb.get<EntityId>(target_key).id;
    if (std::find(obs.fallen_enemies.begin(), obs.fallen_enemies.end(), target) != obs.fallen_enemies.end()) {
        return {Engagement::Killed, target, call.bb.get<Vec2>(seen_key)};
    }
    if (const auto* seen = find_visible(obs, target)) {
        call.bb.set(lost_key, TickCounter{0});
        call.bb.set(seen_key, seen->position);
        return {Engagement::Active, target, seen->position};
    }
    if (!obs.visible_enemies.empty()) {
        acquire();
        return out;
    }
    const int lost = call.bb.get<TickCounter>(lost_key).ticks + 1;
    call.bb.set(lost_key, TickCounter{lost});
    if (lost >= kTargetLostTicks) {
        return {Engagement::Failed, target, call.bb.get<Vec2>(seen_key)};
    }
    return {Engagement::Lost, target, call.bb.get<Vec2>(seen_key)};
}

btree::Bindings shooter_bindings(const TaskWeights& weights) {
    btree::Bindings b;
    for (const char* key : {"has_enemy_in_view", "has_known_enemy_location", "is_low_health", "is_out_of_ammo",
                            "is_on_objective", "has_objective", "has_teammate_nearby", "enemy_in_close_range",
                            "is_aimed_at_enemy", "is_outnumbered"}) {
        const std::string k = key;
        b.bind_condition(k, [k](const Observation& obs, const btree::Blackboard&) { return obs.fact(k); });
    }
    if (weights.shoot) {
        b.bind_neural("shoot", neural_shoot(weights.shoot));
    } else {
        b.bind_rule("shoot", rule_shoot);
    }
    if (weights.move_to) {
        b.bind_neural("move_to", neural_move_to(weights.move_to));
    } else {
        b.bind_rule("move_to", rule_move_to);
    }
    b.bind_rule("retreat", rule_retreat);
    b.bind_rule("patrol", rule_patrol);
    b.bind_rule("wait", [](TaskCall&) { return TaskResult{TickStatus::Running, Action::wait()}; });
    return b;
}

}  // namespace bta::fps
