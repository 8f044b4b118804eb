#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bta/core/error.hpp"
#include "bta/dsl/dsl.hpp"
#include "bta/fps/catalog.hpp"
#include "bta/fps/match.hpp"
#include "bta/fps/scenarios.hpp"
#include "bta/search/bfs.hpp"
#include "bta/search/evaluate.hpp"
#include "bta/search/feedback.hpp"
#include "bta/search/objective.hpp"
#include "bta/search/tactical.hpp"
#include "bta/search/trajectory.hpp"

namespace bta::search {
namespace {

const char* kWait = "selector:\n  task: wait\n";
const char* kShootOrPatrol =
    "selector:\n"
    "  sequence:\n"
    "    condition: has_enemy_in_view\n"
    "    task: shoot random_enemy_in_view\n"
    "  task: patrol\n";

dsl::BtNode tree(const std::string& text) { return dsl::parse_or_throw(text); }

const dsl::NodeCatalog& catalog() {
    static const auto c = fps::shooter_catalog();
    return c;
}

EvalConfig kill_range_eval(int episodes = 3, int ticks = 200, std::uint64_t seed = 1) {
    EvalConfig e;
    auto s = fps::kill_range_scenario();
    s.max_ticks = ticks;
    e.scenarios = {s};
    e.episodes = episodes;
    e.seed = seed;
    return e;
}

SearchConfig toy_search(int n, int k, int iterations) {
    SearchConfig c;
    c.n = n;
    c.k = k;
    c.iterations = iterations;
    c.eval = kill_range_eval(3, 150);
    c.scenario_text = "One shooter against three idle targets.";
    c.tactics_text = "Kill targets as quickly as possible.";
    return c;
}

std::string temp_path(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "bta_test_search";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

// ---- objective --------------------------------------------------------------

TEST(Objective, ParsesBundlesAndRejectsUnknownTerms) {
    const auto o = parse_objective("kills:1,damage:0.01");
    ASSERT_EQ(o.terms.size(), 2u);
    EXPECT_EQ(o.terms[1].first, "damage");
    EXPECT_DOUBLE_EQ(o.terms[1].second, 0.01);
    EXPECT_FALSE(o.needs_tactical());
    EXPECT_TRUE(parse_objective("tactical").needs_tactical());
    EXPECT_EQ(parse_objective("time_between_kills").name(), "time_between_kills");
    try {
        parse_objective("kills,headshots");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "bad-objective");
        EXPECT_NE(std::string(e.what()).find("headshots"), std::string::npos);
    }
    EXPECT_THROW(parse_objective("kills:x"), Error);
    EXPECT_THROW(parse_objective(""), Error);
}

TEST(Objective, TimeBetweenKillsUndefinedBelowTwoKills) {
    arena::GameMetrics m;
    m.teams[0].kills = 1;
    m.teams[0].kill_ticks = {10};
    EXPECT_FALSE(objective_value(parse_objective("time_between_kills"), m, 0, {}, nullptr).has_value());
    m.teams[0].kills = 2;
    m.teams[0].kill_ticks = {10, 20};
    const auto v = objective_value(parse_objective("time_between_kills"), m, 0, {}, nullptr);
    ASSERT_TRUE(v.has_value());
    EXPECT_DOUBLE_EQ(*v, 5.0 / 10.0);
    EXPECT_DOUBLE_EQ(*objective_value(parse_objective("deaths:2"), m, 0, {}, nullptr), 0.0);
}

TEST(Objective, FallbackIsBelowZeroAndOrdersByKillsThenDamage) {
    EXPECT_DOUBLE_EQ(fallback_reward(0, 0), -1.0);
    EXPECT_LT(fallback_reward(0, 0), fallback_reward(0, 25));
    EXPECT_LT(fallback_reward(0, 900), fallback_reward(1, 0));
    EXPECT_LT(fallback_reward(5, 5000), 0.0);
}

// ---- evaluate ---------------------------------------------------------------

TEST(Evaluate, WaitTreeSitsAtTheFloor) {
    const auto e = evaluate_tree(tree(kWait), kill_range_eval());
    EXPECT_TRUE(e.fallback);
    EXPECT_EQ(e.undefined_episodes, 3);
    EXPECT_DOUBLE_EQ(e.reward, -1.0);
    EXPECT_EQ(e.summary.kills, 0.0);
    EXPECT_EQ(e.trace_hashes.size(), 3u);
}

TEST(Evaluate, ListingBeatsWaitOnEverySeed) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto cfg = kill_range_eval(3, 300, seed);
        const auto listing = evaluate_tree(tree(fps::aggressive_tree_text()), cfg);
        const auto wait = evaluate_tree(tree(kWait), cfg);
        EXPECT_GT(listing.reward, wait.reward) << "seed " << seed;
    }
}

TEST(Evaluate, DeterministicAndThreadIndependent) {
    const auto cfg = kill_range_eval();
    const std::vector<dsl::BtNode> trees = {tree(kWait), tree(kShootOrPatrol), tree(fps::aggressive_tree_text())};
    const auto a = evaluate_many(trees, cfg, 1);
    const auto b = evaluate_many(trees, cfg, 3);
    EXPECT_EQ(a, b);
    EXPECT_EQ(evaluate_tree(trees[2], cfg), a[2]);
}

TEST(Evaluate, RejectsEmptyConfig) {
    EvalConfig cfg;
    EXPECT_THROW(evaluate_tree(tree(kWait), cfg), Error);
    cfg = kill_range_eval();
    cfg.episodes = 0;
    EXPECT_THROW(evaluate_tree(tree(kWait), cfg), Error);
}

TEST(Evaluate, EpisodeSeedsDependOnScenarioAndIndex) {
    auto cfg = kill_range_eval();
    cfg.scenarios.push_back(fps::team_scenario());
    EXPECT_NE(episode_seed(cfg, 0, 0), episode_seed(cfg, 0, 1));
    EXPECT_NE(episode_seed(cfg, 0, 0), episode_seed(cfg, 1, 0));
    EXPECT_EQ(episode_seed(cfg, 1, 2), episode_seed(cfg, 1, 2));
}

// ---- feedback ---------------------------------------------------------------

MetricsSummary summary(double kills, double deaths, std::optional<double> tbk) {
    MetricsSummary m;
    m.episodes = 5;
    m.kills = kills;
    m.deaths = deaths;
    m.shots = 40;
    m.hits = 20;
    m.damage = 500;
    m.time_between_kills = tbk;
    return m;
}

TEST(Feedback, ReportsImprovement) {
    const auto text = metrics_to_text(summary(5, 1, 20.0), summary(3, 1, 25.0));
    EXPECT_NE(text.find("kills improved from 3 to 5"), std::string::npos) << text;
    EXPECT_NE(text.find("time_between_kills improved from 25 to 20"), std::string::npos) << text;
}

TEST(Feedback, AbsentCadenceIsNotObserved) {
    const auto text = metrics_to_text(summary(1, 0, std::nullopt));
    EXPECT_NE(text.find("time_between_kills: not observed (fewer than 2 kills)"), std::string::npos) << text;
}

TEST(Feedback, IdenticalMetricsReportNoChangeEverywhere) {
    const auto m = summary(3, 2, 12.5);
    const auto text = metrics_to_text(m, m);
    std::istringstream in(text);
    std::string line;
    int fields = 0;
    while (std::getline(in, line)) {
        if (line.rfind("- ", 0) == 0) {
            ++fields;
            EXPECT_NE(line.find("no change"), std::string::npos) << line;
        }
    }
    EXPECT_EQ(fields, 7);
}

TEST(Feedback, WorstRegressionComesFirst) {
    auto before = summary(3, 1, 20.0);
    auto after = summary(3, 4, 20.0);  // deaths +3
    after.damage = 400;                // damage -100
    after.hits = 21;
    const auto text = metrics_to_text(after, before);
    const auto damage = text.find("damage regressed from 500 to 400");
    const auto deaths = text.find("deaths regressed from 1 to 4");
    const auto hits = text.find("hits improved from 20 to 21");
    ASSERT_NE(damage, std::string::npos) << text;
    ASSERT_NE(deaths, std::string::npos) << text;
    ASSERT_NE(hits, std::string::npos) << text;
    EXPECT_LT(damage, deaths);
    EXPECT_LT(deaths, hits);
}

TEST(Feedback, EvaluationFeedbackIncludesTactics) {
    Evaluation e;
    e.reward = 0.25;
    e.summary = summary(2, 0, 10.0);
    e.tactical = TacticalReport{};
    e.tactical->scores = {1, 2, 3, 4, 5};
    const auto text = evaluation_feedback(e);
    EXPECT_NE(text.find("Tactical Analysis"), std::string::npos);
    EXPECT_NE(text.find("- team_aggression: 4/10"), std::string::npos) << text;
}

// ---- tactical ---------------------------------------------------------------

arena::ReplayTrace team_trace(const std::string& tree_text, std::uint64_t seed, int ticks = 200) {
    auto s = fps::team_scenario();
    s.max_ticks = ticks;
    return fps::run_scenario(s, fps::compile_shooter(tree(tree_text)), seed).trace;
}

// Swaps team labels (spawns included) and renumbers agents so the new team 0
// still comes first. Geometry is untouched: reflecting it would move agents
// that stand exactly on a cell boundary into a different cell.
arena::ReplayTrace relabel(const arena::ReplayTrace& t) {
    std::string text = t.map->to_text();
    for (auto& c : text) {
        c = c == 'A' ? 'B' : c == 'B' ? 'A' : c;
    }
    arena::ReplayTrace out = t;
    out.map = std::make_shared<const arena::MapSpec>(arena::MapSpec::parse(text));
    out.team_sizes = {t.team_sizes[1], t.team_sizes[0]};
    const int n0 = t.team_sizes[0];
    const int total = t.team_sizes[0] + t.team_sizes[1];
    auto remap = [&](int id) { return id < 0 ? id : (id < n0 ? id + t.team_sizes[1] : id - n0); };
    auto snapshots = [&](const std::vector<arena::AgentSnapshot>& in) {
        std::vector<arena::AgentSnapshot> o(in.size());
        for (const auto& a : in) {
            auto b = a;
            b.id = remap(a.id);
            b.team = 1 - a.team;
            b.aim_target = remap(a.aim_target);
            o[static_cast<std::size_t>(b.id)] = b;
        }
        return o;
    };
    out.initial = snapshots(t.initial);
    for (auto& f : out.frames) {
        const auto& src = t.frames[static_cast<std::size_t>(&f - out.frames.data())];
        f.agents = snapshots(src.agents);
        f.actions.assign(static_cast<std::size_t>(total), arena::Action::wait());
        for (std::size_t i = 0; i < src.actions.size(); ++i) {
            auto a = src.actions[i];
            a.agent = remap(a.agent);
            a.target = remap(a.target);
            f.actions[static_cast<std::size_t>(remap(static_cast<int>(i)))] = a;
        }
        for (auto& e : f.events) {
            e.actor = remap(e.actor);
            e.target = remap(e.target);
        }
    }
    return out;
}

TEST(Tactical, SoleTeamOnTheMapControlsAllOfIt) {
    auto t = team_trace(fps::aggressive_tree_text(), 3, 60);
    for (auto& a : t.initial) {
        a.alive = a.alive && a.team == 0;
    }
    for (auto& f : t.frames) {
        for (auto& a : f.agents) {
            if (a.team == 1) {
                a.alive = false;
            }
        }
    }
    EXPECT_DOUBLE_EQ(tactical_analysis(t, 0).score(Dimension::MapControl), 10.0);
    EXPECT_DOUBLE_EQ(tactical_analysis(t, 1).score(Dimension::MapControl), 0.0);
}

TEST(Tactical, IdleTeamsShowNoAggression) {
    auto s = fps::team_scenario();
    s.max_ticks = 80;
    s.opponent = tree(kWait);
    const auto t = fps::run_scenario(s, fps::compile_shooter(tree(kWait)), 1).trace;
    EXPECT_DOUBLE_EQ(tactical_analysis(t, 0).score(Dimension::TeamAggression), 0.0);
    EXPECT_DOUBLE_EQ(tactical_analysis(t, 1).score(Dimension::TeamAggression), 0.0);
}

TEST(Tactical, InvariantUnderTeamRelabelling) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto t = team_trace(fps::aggressive_tree_text(), seed);
        const auto r = relabel(t);
        for (int team = 0; team < 2; ++team) {
            const auto a = tactical_analysis(t, team);
            const auto b = tactical_analysis(r, 1 - team);
            for (int d = 0; d < kDimensionCount; ++d) {
                EXPECT_NEAR(a.scores[static_cast<std::size_t>(d)], b.scores[static_cast<std::size_t>(d)], 1e-9)
                    << "seed " << seed << " team " << team << " " << to_string(static_cast<Dimension>(d));
            }
        }
    }
}

TEST(Tactical, ScoresStayInRangeWithNotes) {
    for (const auto* text : {kWait, kShootOrPatrol, fps::aggressive_tree_text().c_str()}) {
        const auto t = team_trace(text, 11, 150);
        for (int team = 0; team < 2; ++team) {
            const auto r = tactical_analysis(t, team);
            for (int d = 0; d < kDimensionCount; ++d) {
                EXPECT_GE(r.scores[static_cast<std::size_t>(d)], 0.0);
                EXPECT_LE(r.scores[static_cast<std::size_t>(d)], 10.0);
                EXPECT_TRUE(std::isfinite(r.scores[static_cast<std::size_t>(d)]));
                EXPECT_FALSE(r.notes[static_cast<std::size_t>(d)].empty());
            }
        }
    }
}

TEST(Tactical, EmptyTraceIsAnError) {
    arena::ReplayTrace t;
    try {
        tactical_analysis(t, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "empty-trace");
    }
}

TEST(Tactical, DimensionsImprovedCountsStrictGainsAndCeiling) {
    TacticalReport a, b;
    a.scores = {1, 5, 10, 3, 2};
    b.scores = {2, 5, 10, 2, 9};
    EXPECT_EQ(dimensions_improved(a, b), 3);
    const std::vector<TacticalReport> both = {a, b};
    EXPECT_DOUBLE_EQ(average(both).scores[4], 5.5);
}

// ---- bfs --------------------------------------------------------------------

TEST(Bfs, SplitChildren) {
    EXPECT_EQ(split_children(8, 2), (std::vector<int>{4, 4}));
    EXPECT_EQ(split_children(8, 3), (std::vector<int>{3, 3, 2}));
    EXPECT_EQ(split_children(2, 3), (std::vector<int>{1, 1, 0}));
    EXPECT_TRUE(split_children(8, 0).empty());
}

TEST(Bfs, RankingTieBreaks) {
    Candidate a, b;
    a.id = 1;
    b.id = 0;
    a.eval = b.eval = Evaluation{};
    a.eval->reward = b.eval->reward = 0.5;
    a.iteration = 0;
    b.iteration = 1;
    EXPECT_TRUE(ranks_before(a, b));  // earlier iteration
    b.iteration = 0;
    a.dsl = "a";
    b.dsl = "b";
    EXPECT_TRUE(ranks_before(a, b));  // then text
    b.eval->reward = 0.6;
    EXPECT_TRUE(ranks_before(b, a));  // reward first
    Candidate invalid;
    EXPECT_TRUE(ranks_before(a, invalid));
}

TEST(Bfs, ConfigChecks) {
    auto c = toy_search(4, 5, 1);
    EXPECT_THROW(c.check(), Error);
    c = toy_search(4, 2, 1);
    c.eval.episodes = 2;
    EXPECT_THROW(c.check(), Error);
    c = toy_search(4, 2, 0);
    EXPECT_THROW(c.check(), Error);
    EXPECT_NO_THROW(toy_search(4, 4, 1).check());
}

genkit::MutateGenerator mutate_generator(std::uint64_t seed, const std::string& seed_tree = kShootOrPatrol) {
    return genkit::MutateGenerator({seed, {}}, catalog(), tree(seed_tree));
}

TEST(Bfs, ElitismGivesNonDecreasingBestCurve) {
    auto gen = mutate_generator(3);
    const auto r = bfs_search(toy_search(4, 2, 4), gen, catalog());
    ASSERT_TRUE(r.complete);
    ASSERT_TRUE(r.best.has_value());
    const auto curve = r.state.best_curve();
    ASSERT_EQ(curve.size(), 4u);
    for (std::size_t t = 1; t < curve.size(); ++t) {
        ASSERT_TRUE(curve[t].has_value());
        EXPECT_GE(*curve[t], *curve[t - 1]);
    }
    EXPECT_EQ(r.state.candidates.size(), 16u);
    EXPECT_DOUBLE_EQ(*r.best->reward(), *curve.back());
}

TEST(Bfs, EqualNAndKKeepsEveryCandidate) {
    auto gen = mutate_generator(5);
    const auto r = bfs_search(toy_search(3, 3, 3), gen, catalog());
    for (int t = 0; t < 3; ++t) {
        std::vector<int> generated;
        for (const auto& c : r.state.candidates) {
            if (c.iteration == t) {
                generated.push_back(c.id);
            }
        }
        auto kept = r.state.retained[static_cast<std::size_t>(t)];
        std::sort(kept.begin(), kept.end());
        EXPECT_EQ(kept, generated) << "iteration " << t;
    }
}

TEST(Bfs, LineageFollowsRetainedParents) {
    auto gen = mutate_generator(7);
    const auto r = bfs_search(toy_search(4, 2, 3), gen, catalog());
    for (const auto& c : r.state.candidates) {
        if (c.iteration == 0) {
            EXPECT_FALSE(c.parent.has_value());
            continue;
        }
        ASSERT_TRUE(c.parent.has_value());
        const auto& kept = r.state.retained[static_cast<std::size_t>(c.iteration - 1)];
        const auto elite = r.state.elite[static_cast<std::size_t>(c.iteration - 1)];
        const bool from_kept = std::find(kept.begin(), kept.end(), *c.parent) != kept.end();
        EXPECT_TRUE(from_kept || *c.parent == *elite);
        // The prompt carries the parent tree back as history.
        EXPECT_NE(c.prompt.find("### History Format Errors"), std::string::npos);
        EXPECT_NE(c.prompt.find(r.state.candidates[static_cast<std::size_t>(*c.parent)].dsl), std::string::npos);
        EXPECT_NE(c.prompt.find("Results of the previous tree"), std::string::npos);
    }
}

TEST(Bfs, BitReproducible) {
    auto g1 = mutate_generator(11);
    auto g2 = mutate_generator(11);
    const auto a = bfs_search(toy_search(4, 2, 3), g1, catalog());
    const auto b = bfs_search(toy_search(4, 2, 3), g2, catalog());
    EXPECT_EQ(a.state, b.state);
    EXPECT_EQ(to_jsonl(trajectory_records(a.state)), to_jsonl(trajectory_records(b.state)));
    EXPECT_EQ(candidates_csv(a.state), candidates_csv(b.state));
}

TEST(Bfs, ResumeMatchesUninterruptedRun) {
    const auto cfg = toy_search(4, 2, 4);
    auto g1 = mutate_generator(13);
    const auto full = bfs_search(cfg, g1, catalog());

    const auto ckpt = temp_path("resume.json");
    auto g2 = mutate_generator(13);
    SearchOptions first;
    first.checkpoint_path = ckpt;
    first.stop_after = 2;
    const auto partial = bfs_search(cfg, g2, catalog(), first);
    EXPECT_FALSE(partial.complete);
    EXPECT_EQ(partial.state.next_iteration, 2);

    std::ifstream in(ckpt);
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    SearchOptions second;
    second.resume = state_from_json(text, config_hash(cfg));
    EXPECT_EQ(*second.resume, partial.state);
    auto g3 = mutate_generator(13);
    const auto resumed = bfs_search(cfg, g3, catalog(), second);
    EXPECT_TRUE(resumed.complete);
    EXPECT_EQ(resumed.state, full.state);
}

TEST(Bfs, CheckpointRejectsOtherConfigs) {
    const auto cfg = toy_search(4, 2, 1);
    SearchState s;
    const auto text = state_to_json(s, config_hash(cfg));
    auto other = cfg;
    other.eval.seed = 99;
    try {
        state_from_json(text, config_hash(other));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "bad-checkpoint");
    }
    EXPECT_THROW(state_from_json("{", config_hash(cfg)), Error);
}

// Returns scripted completions, cycling through them.
class ScriptedGenerator : public genkit::Generator {
public:
    explicit ScriptedGenerator(std::vector<std::string> completions) : completions_(std::move(completions)) {}

    std::vector<genkit::GenerationRecord> generate(const genkit::GenerationRequest& request, int n) override {
        prompts.push_back(request.prompt);
        if (fail_after >= 0 && calls_++ >= fail_after) {
            throw Error("generator-unavailable", "backend down");
        }
        std::vector<genkit::GenerationRecord> out;
        for (int i = 0; i < n; ++i) {
            genkit::GenerationRecord r;
            r.prompt = request.prompt;
            r.completion = completions_[next_++ % completions_.size()];
            r.mode = genkit::GeneratorMode::Remote;
            genkit::annotate(r);
            out.push_back(std::move(r));
        }
        return out;
    }
    genkit::GeneratorMode mode() const override { return genkit::GeneratorMode::Remote; }

    std::vector<std::string> prompts;
    int fail_after = -1;

private:
    std::vector<std::string> completions_;
    std::size_t next_ = 0;
    int calls_ = 0;
};

TEST(Bfs, InvalidCandidatesAreNeverEvaluatedAndFeedBack) {
    ScriptedGenerator gen({std::string("```\n") + kShootOrPatrol + "```\n",
                           "```\nselector:\n  task: teleport\n```\n",
                           "I am not sure what to write."});
    auto cfg = toy_search(3, 1, 2);
    const auto r = bfs_search(cfg, gen, catalog());
    int invalid = 0;
    for (const auto& c : r.state.candidates) {
        EXPECT_EQ(c.valid, c.eval.has_value());
        if (!c.valid) {
            ++invalid;
            ASSERT_FALSE(c.diagnostics.empty());
        }
    }
    EXPECT_GE(invalid, 2);
    // Iteration-0 errors show up in the iteration-1 prompt of that lineage.
    const auto& c0 = r.state.candidates[1];
    ASSERT_FALSE(c0.valid);
    const auto& next_prompt = gen.prompts.back();
    EXPECT_NE(next_prompt.find(c0.diagnostics.front()), std::string::npos) << next_prompt;
    EXPECT_NE(next_prompt.find("no-dsl"), std::string::npos);
}

TEST(Bfs, UnavailableGeneratorLeavesCheckpoint) {
    ScriptedGenerator gen({std::string("```\n") + kShootOrPatrol + "```\n"});
    gen.fail_after = 2;
    const auto cfg = toy_search(2, 1, 4);
    const auto ckpt = temp_path("unavailable.json");
    std::filesystem::remove(ckpt);
    SearchOptions opt;
    opt.checkpoint_path = ckpt;
    try {
        bfs_search(cfg, gen, catalog(), opt);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "generator-unavailable");
    }
    std::ifstream in(ckpt);
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    const auto s = state_from_json(text, config_hash(cfg));
    EXPECT_EQ(s.next_iteration, 2);
}

// ---- trajectory -------------------------------------------------------------

TrajectoryRecord random_record(Rng& rng, int t) {
    TrajectoryRecord r;
    r.t = t;
    r.prompt = "prompt \"" + std::to_string(rng()) + "\"\n\twith escapes \\";
    r.dsl = "selector:\n  task: wait\n";
    r.valid = bernoulli(rng, 0.7);
    if (r.valid) {
        r.reward = uniform01(rng) * 2 - 1;
        if (bernoulli(rng, 0.5)) {
            r.tactical = TacticalReport{};
            for (auto& s : r.tactical->scores) {
                s = uniform01(rng) * 10;
            }
        }
    } else {
        r.diagnostics = {"error[unknown-action] 2:9: teleport", "error[x]: \xC3\xA9"};
    }
    return r;
}

TEST(Trajectory, TenRecordsTenSchemaLines) {
    Rng rng(1);
    std::vector<TrajectoryRecord> recs;
    for (int i = 0; i < 10; ++i) {
        recs.push_back(random_record(rng, i / 3));
    }
    const auto path = temp_path("ten.jsonl");
    export_trajectories(recs, path);
    std::ifstream in(path);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        ++lines;
        const auto j = nlohmann::json::parse(line);
        EXPECT_EQ(j.size(), 7u);
        EXPECT_TRUE(j.at("t").is_number_integer());
        EXPECT_TRUE(j.at("prompt").is_string());
        EXPECT_TRUE(j.at("dsl").is_string());
        EXPECT_TRUE(j.at("reward").is_number() || j.at("reward").is_null());
        EXPECT_TRUE(j.at("valid").is_boolean());
        EXPECT_TRUE(j.at("diagnostics").is_array());
        const auto& tac = j.at("tactical");
        if (!tac.is_null()) {
            EXPECT_EQ(tac.size(), 5u);
            EXPECT_TRUE(tac.at("map_control").is_number());
        }
    }
    EXPECT_EQ(lines, 10);
}

TEST(Trajectory, RoundTripProperty) {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<TrajectoryRecord> recs;
        const int n = 1 + static_cast<int>(uniform_index(rng, 12));
        for (int i = 0; i < n; ++i) {
            recs.push_back(random_record(rng, i));
        }
        EXPECT_EQ(from_jsonl(to_jsonl(recs)), recs);
    }
}

TEST(Trajectory, EmptyHistoryAndIoErrors) {
    try {
        export_trajectories({}, temp_path("empty.jsonl"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "empty-history");
    }
    Rng rng(1);
    const std::string bad = "/nonexistent-dir/x.jsonl";
    try {
        export_trajectories({random_record(rng, 0)}, bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "io");
        EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.jsonl"), std::string::npos);
    }
}

TEST(Trajectory, CsvAndPlotCoverTheSearch) {
    auto gen = mutate_generator(17);
    const auto r = bfs_search(toy_search(3, 1, 2), gen, catalog());
    const auto csv = candidates_csv(r.state);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 6);
    const auto curve = reward_curve_csv(r.state);
    EXPECT_EQ(curve.rfind("iteration,best_reward", 0), 0u);
    EXPECT_EQ(std::count(curve.begin(), curve.end(), '\n'), 1 + 2);
    const auto svg = reward_plot_svg(r.state);
    EXPECT_NE(svg.find("<polyline"), std::string::npos);
    EXPECT_NE(svg.find("<circle"), std::string::npos);
    const auto records = trajectory_records(r.state);
    ASSERT_EQ(records.size(), 6u);
    EXPECT_EQ(records[3].t, 1);
}

}  // namespace
}  // namespace bta::search
