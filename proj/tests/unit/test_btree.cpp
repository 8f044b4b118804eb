#include <gtest/gtest.h>

#include "bta/arena/episode.hpp"
#include "bta/arena/navigation.hpp"
#include "bta/arena/world.hpp"
#include "bta/btree/policy.hpp"
#include "bta/core/error.hpp"
#include "bta/dsl/dsl.hpp"
#include "bta/fps/bindings.hpp"
#include "bta/fps/catalog.hpp"
#include "bta/fps/scenarios.hpp"
#include "reference_bt.hpp"
#include "tree_gen.hpp"

namespace bta::btree {
namespace {

using arena::Action;

const char* kListing =
    "selector:\n"
    "  sequence:\n"
    "    condition: has_enemy_in_view\n"
    "    task: shoot random_enemy_in_view\n"
    "  sequence:\n"
    "    condition: no\n"
    "    condition: has_enemy_in_view\n"
    "    task: move_to random_enemy_location\n";

CompiledPolicy compile_fps(const std::string& text) {
    return CompiledPolicy::compile(dsl::parse_or_throw(text), fps::shooter_catalog(), fps::shooter_bindings());
}

arena::World kill_range_world(Vec2 shooter, Vec2 target) {
    Rng rng(1);
    auto map = std::make_shared<const arena::MapSpec>(arena::MapSpec::parse(fps::kill_range_map_text()));
    arena::World w = arena::make_world(map, {1, 1}, arena::CombatRules{}, rng);
    w.agents[0].position = shooter;
    w.agents[1].position = target;
    w.memory[0][1] = target;
    return w;
}

TEST(Compile, ListingHasSevenPreorderNodes) {
    const auto p = compile_fps(kListing);
    EXPECT_EQ(p.node_count(), 7u);
    EXPECT_EQ(p.handler_kind(0), HandlerKind::Composite);
    EXPECT_EQ(p.handler_kind(1), HandlerKind::Composite);
    EXPECT_EQ(p.handler_kind(2), HandlerKind::Condition);
    EXPECT_EQ(p.handler_kind(3), HandlerKind::Rule);
    EXPECT_EQ(p.handler_kind(4), HandlerKind::Composite);
    EXPECT_EQ(p.handler_kind(5), HandlerKind::Condition);
    EXPECT_EQ(p.handler_kind(6), HandlerKind::Rule);
}

TEST(Compile, SingleTaskUnderSelector) {
    EXPECT_EQ(compile_fps("selector:\n  task: wait\n").node_count(), 2u);
}

TEST(Compile, MissingBindingAndInvalidTree) {
    Bindings empty;
    try {
        CompiledPolicy::compile(dsl::parse_or_throw(kListing), fps::shooter_catalog(), empty);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "unbound-handler");
    }
    try {
        compile_fps("selector:\n  task: fly\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "invalid-tree");
    }
}

TEST(Compile, NeuralBindingWhenWeightsPresent) {
    Rng rng(1);
    fps::TaskWeights weights;
    weights.move_to = std::make_shared<const neural::NetParams>(
        neural::NetParams::random(neural::kTaskObservationSize, 8, neural::kMoveOutputs, rng));
    const auto p =
        CompiledPolicy::compile(dsl::parse_or_throw(kListing), fps::shooter_catalog(), fps::shooter_bindings(weights));
    EXPECT_EQ(p.handler_kind(3), HandlerKind::Rule);
    EXPECT_EQ(p.handler_kind(6), HandlerKind::Neural);
}

TEST(Tick, ListingShootsVisibleEnemy) {
    auto p = compile_fps(kListing);
    Blackboard bb;
    const auto w = kill_range_world({1.5, 5.5}, {5.5, 5.5});
    const auto r = p.tick(arena::observe(w, 0), bb);
    EXPECT_EQ(r.status, TickStatus::Running);
    ASSERT_TRUE(r.action.has_value());
    EXPECT_EQ(*r.action, Action::aim(1));
}

TEST(Tick, ListingHuntsRememberedEnemy) {
    auto p = compile_fps(kListing);
    Blackboard bb;
    const auto w = kill_range_world({1.5, 5.5}, {17.5, 5.5});
    const auto obs = arena::observe(w, 0);
    ASSERT_FALSE(obs.fact("has_enemy_in_view"));
    const auto r = p.tick(obs, bb);
    EXPECT_EQ(r.status, TickStatus::Running);
    ASSERT_TRUE(r.action.has_value());
    EXPECT_EQ(r.action->verb, arena::Verb::Move);
}

TEST(Tick, SelectorFallsThroughFailedCondition) {
    auto p = compile_fps("selector:\n  condition: is_low_health\n  task: wait\n");
    Blackboard bb;
    const auto r = p.tick(arena::observe(kill_range_world({1.5, 5.5}, {17.5, 5.5}), 0), bb);
    EXPECT_EQ(r.status, TickStatus::Running);
    EXPECT_EQ(r.action, Action::wait());
}

TEST(Tick, ReactiveSelectorPreemptsRunningBranch) {
    auto p = compile_fps(kListing);
    Blackboard bb;
    const auto far = kill_range_world({1.5, 5.5}, {17.5, 5.5});
    EXPECT_EQ(p.tick(arena::observe(far, 0), bb).action->verb, arena::Verb::Move);
    EXPECT_TRUE(bb.has("node.6.enemy"));
    const auto near = kill_range_world({1.5, 5.5}, {5.5, 5.5});
    EXPECT_EQ(p.tick(arena::observe(near, 0), bb).action, Action::aim(1));
    // the preempted move_to lost its scope
    EXPECT_FALSE(bb.has("node.6.enemy"));
}

TEST(Tick, HandlerExceptionBecomesFailure) {
    Bindings b = fps::shooter_bindings();
    b.bind_rule("wait", [](TaskCall&) -> TaskResult { throw std::runtime_error("boom"); });
    auto p = CompiledPolicy::compile(dsl::parse_or_throw("selector:\n  task: wait\n"), fps::shooter_catalog(), b);
    Blackboard bb;
    const auto r = p.tick(arena::observe(kill_range_world({1.5, 5.5}, {17.5, 5.5}), 0), bb);
    EXPECT_EQ(r.status, TickStatus::Failure);
    EXPECT_FALSE(r.action.has_value());
    ASSERT_EQ(p.diagnostics().size(), 1u);
    EXPECT_NE(p.diagnostics()[0].find("runtime-error"), std::string::npos);
}

TEST(Blackboard, TypedAccess) {
    Blackboard bb;
    EXPECT_THROW(bb.get<double>("x"), Error);
    bb.set("x", 2.0);
    EXPECT_EQ(bb.get<double>("x"), 2.0);
    try {
        bb.get<Vec2>("x");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "type-mismatch");
    }
    bb.set("node.1.a", EntityId{3});
    bb.set("node.1.b", TickCounter{4});
    bb.set("node.10.a", Vec2{1, 2});
    bb.erase_prefix("node.1.");
    EXPECT_EQ(bb.keys(), (std::vector<std::string>{"node.10.a", "x"}));
}

using testing::random_facts;
using testing::Reference;
using testing::Script;
using testing::script_tasks;
using testing::scripted_bindings;

TEST(Semantics, AgreesWithReferenceInterpreter) {
    Rng rng(2024);
    const auto catalog = fps::shooter_catalog();
    for (int trial = 0; trial < 1000; ++trial) {
        const auto tree = bta::testing::random_tree(rng, catalog);
        auto script = std::make_shared<Script>();
        auto policy = CompiledPolicy::compile(tree, catalog, scripted_bindings(script));
        Reference ref(tree, script);
        Blackboard bb;
        for (int t = 0; t < 4; ++t) {
            int id = 0;
            script->task_status.clear();
            script_tasks(tree, *script, rng, id);
            arena::Observation obs;
            obs.facts = random_facts(rng);
            const auto got = policy.tick(obs, bb);
            const auto want = ref.tick(obs.facts);
            ASSERT_EQ(got.status, want.first) << "trial " << trial << " tick " << t << "\n"
                                              << dsl::to_canonical_dsl(tree);
            ASSERT_EQ(got.action, want.second) << "trial " << trial << " tick " << t;
        }
    }
}

TEST(Semantics, NegationFlipsConditionStatus) {
    Rng rng(5);
    const auto catalog = fps::shooter_catalog();
    for (const auto& c : catalog.conditions()) {
        auto script = std::make_shared<Script>();
        auto plain = CompiledPolicy::compile(dsl::BtNode::condition(c.key), catalog, scripted_bindings(script));
        auto neg = CompiledPolicy::compile(dsl::BtNode::condition(c.key, true), catalog, scripted_bindings(script));
        for (int i = 0; i < 10; ++i) {
            arena::Observation obs;
            obs.facts = random_facts(rng);
            Blackboard bb;
            const auto a = plain.tick(obs, bb).status;
            const auto b = neg.tick(obs, bb).status;
            EXPECT_NE(a, TickStatus::Running);
            EXPECT_NE(a, b);
        }
    }
}

TEST(Semantics, ConditionsLeaveBlackboardUntouched) {
    const auto bindings = fps::shooter_bindings();
    const auto w = kill_range_world({1.5, 5.5}, {5.5, 5.5});
    const auto obs = arena::observe(w, 0);
    Blackboard bb;
    bb.set("node.3.target", EntityId{1});
    bb.set("shared", Vec2{2, 3});
    const auto before = bb.hash();
    const auto catalog = fps::shooter_catalog();
    for (const auto& c : catalog.conditions()) {
        (*bindings.condition(c.key))(obs, bb);
        EXPECT_EQ(bb.hash(), before) << c.key;
    }
}

TEST(Reset, MatchesFreshPolicy) {
    auto p = compile_fps(kListing);
    Blackboard bb;
    const auto far = arena::observe(kill_range_world({1.5, 5.5}, {17.5, 5.5}), 0);
    const auto fresh = compile_fps(kListing).clone();
    auto f = fresh.clone();
    Blackboard fresh_bb;
    const auto expected = f.tick(far, fresh_bb);

    ASSERT_EQ(p.tick(far, bb).status, TickStatus::Running);
    p.reset(bb);
    EXPECT_EQ(bb.size(), 0u);
    p.reset(bb);
    const auto again = p.tick(far, bb);
    EXPECT_EQ(again.status, expected.status);
    EXPECT_EQ(again.action, expected.action);
    EXPECT_EQ(bb, fresh_bb);
}

TEST(Reset, RerunGivesIdenticalTraces) {
    Rng rng(77);
    const auto catalog = fps::shooter_catalog();
    const auto bindings = fps::shooter_bindings();
    for (int trial = 0; trial < 100; ++trial) {
        const auto tree = bta::testing::random_tree(rng, catalog);
        auto policy = CompiledPolicy::compile(tree, catalog, bindings, CompileOptions{false});
        std::vector<arena::Observation> observations;
        for (int i = 0; i < 8; ++i) {
            const Vec2 target{1.5 + static_cast<double>(uniform_index(rng, 18)), 5.5};
            auto w = kill_range_world({1.5, 5.5}, target);
            w.agents[0].health = bernoulli(rng, 0.3) ? 40 : 100;
            observations.push_back(arena::observe(w, 0));
        }
        auto run = [&] {
            Blackboard bb;
            policy.reset(bb);
            policy.seed(9);
            std::vector<std::pair<TickStatus, std::optional<Action>>> trace;
            for (const auto& o : observations) {
                const auto r = policy.tick(o, bb);
                trace.emplace_back(r.status, r.action);
            }
            return trace;
        };
        ASSERT_EQ(run(), run());
    }
}

TEST(PolicyAgent, PlaysAnEpisode) {
    const auto scenario = fps::kill_range_scenario();
    arena::EpisodeConfig cfg;
    cfg.map = scenario.map;
    cfg.team_sizes = scenario.team_sizes;
    cfg.rules = scenario.rules;
    cfg.max_ticks = 300;
    cfg.seed = 4;
    PolicyAgent hunter(compile_fps(fps::aggressive_tree_text()));
    arena::IdleController t1, t2, t3;
    std::vector<arena::AgentController*> ctl = {&hunter, &t1, &t2, &t3};
    const auto r = arena::run_episode(cfg, ctl);
    EXPECT_GT(r.metrics.team(0).kills, 2);
    EXPECT_EQ(r.metrics.team(1).kills, 0);
    EXPECT_TRUE(r.diagnostics.empty());
}

}  // namespace
}  // namespace bta::btree
