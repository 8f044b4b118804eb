#include "bta/cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bta/arena/replay.hpp"
#include "bta/cli/config.hpp"
#include "bta/cli/render.hpp"
#include "bta/core/hash.hpp"
#include "bta/core/rng.hpp"
#include "bta/dsl/dsl.hpp"
#include "bta/fps/catalog.hpp"
#include "bta/fps/match.hpp"
#include "bta/neural/serialize.hpp"
#include "bta/scheduler/scheduler.hpp"
#include "bta/search/feedback.hpp"
#include "bta/search/trajectory.hpp"

#ifndef BTA_VERSION
#define BTA_VERSION "0.0.0"
#endif

namespace bta::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string read_input(const std::string& path, std::istream& in) {
    std::ostringstream ss;
    if (path == "-") {
        ss << in.rdbuf();
        return ss.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw Error("io", "cannot read " + path);
    }
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw Error("io", "cannot write " + path.string());
    }
}

void make_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error("io", "cannot create " + dir.string());
    }
}

std::string hash_of(const std::string& text) { return hex64(fnv1a64(text)); }

dsl::NodeCatalog catalog_from(const std::string& path, std::istream& in) {
    return path.empty() ? fps::shooter_catalog() : dsl::NodeCatalog::from_json(read_input(path, in));
}

// Parses a DSL file, printing diagnostics; nullopt when it has errors.
std::optional<dsl::BtNode> parse_reporting(const std::string& path, const std::string& text, std::ostream& err) {
    auto r = dsl::parse(text);
    for (const auto& d : r.diagnostics) {
        err << path << ":" << dsl::format_diagnostic(d) << "\n";
    }
    return r.tree;
}

dsl::BtNode load_tree(const std::string& path, std::istream& in) { return dsl::parse_or_throw(read_input(path, in)); }

ordered_json manifest_json(const std::string& command, const std::string& config_path, const std::string& config_text,
                           const fs::path& out_dir, std::uint64_t seed) {
    ordered_json j;
    j["command"] = command;
    j["version"] = version();
    j["config_path"] = config_path;
    j["config_text"] = config_text;
    j["output_dir"] = out_dir.string();
    j["seed"] = seed;
    return j;
}

// ---- tree -------------------------------------------------------------

struct TreeArgs {
    std::vector<std::string> paths;
    std::string catalog;
    bool write = false;
};

int tree_check(const TreeArgs& a, Streams io) {
    const auto catalog = catalog_from(a.catalog, io.in);
    bool errors = false;
    for (const auto& path : a.paths) {
        const auto tree = parse_reporting(path, read_input(path, io.in), io.err);
        if (!tree) {
            errors = true;
            continue;
        }
        const auto diags = dsl::validate(*tree, catalog);
        for (const auto& d : diags) {
            io.err << path << ":" << dsl::format_diagnostic(d) << "\n";
        }
        errors = errors || dsl::has_errors(diags);
    }
    return errors ? kExitInvalid : kExitOk;
}

int tree_fmt(const TreeArgs& a, Streams io) {
    bool errors = false;
    for (const auto& path : a.paths) {
        const auto tree = parse_reporting(path, read_input(path, io.in), io.err);
        if (!tree) {
            errors = true;
            continue;
        }
        const auto text = dsl::to_canonical_dsl(*tree);
        if (a.write && path != "-") {
            write_file(path, text);
        } else {
            io.out << text;
        }
    }
    return errors ? kExitInvalid : kExitOk;
}

int tree_to_json(const TreeArgs& a, Streams io) {
    bool errors = false;
    for (const auto& path : a.paths) {
        const auto tree = parse_reporting(path, read_input(path, io.in), io.err);
        if (!tree) {
            errors = true;
            continue;
        }
        io.out << dsl::to_json(*tree) << "\n";
    }
    return errors ? kExitInvalid : kExitOk;
}

int tree_from_json(const TreeArgs& a, Streams io) {
    for (const auto& path : a.paths) {
        io.out << dsl::to_canonical_dsl(dsl::from_json(read_input(path, io.in)));
    }
    return kExitOk;
}

// ---- run / replay -----------------------------------------------------

struct RenderArgs {
    std::string mode;  // "", ascii, svg
    std::string frames_dir = "frames";
    int stride = 1;
};

void render(const arena::ReplayTrace& trace, const RenderArgs& r, Streams io) {
    if (r.mode == "ascii") {
        io.err << ascii_frames(trace, r.stride);
    } else if (r.mode == "svg") {
        const int n = write_svg_frames(trace, r.frames_dir, r.stride);
        io.err << "wrote " << n << " frames to " << r.frames_dir << "\n";
    }
}

struct RunArgs {
    std::vector<std::string> trees;
    std::string library;
    std::string scheduler_weights;
    int review_period = scheduler::SwitchPolicy{}.review_period;
    std::string scenario = "kill_range";
    std::string map;
    std::string opponent;
    std::string weights;
    std::uint64_t seed = 1;
    int ticks = 0;
    RenderArgs render;
    std::string replay_out;
};

int cmd_run(const RunArgs& a, Streams io) {
    if (a.trees.empty() == a.library.empty()) {
        throw Error("usage", "give either --tree or --library");
    }
    auto scenario = scenario_by_name(a.scenario);
    if (!a.map.empty()) {
        scenario.map = std::make_shared<const arena::MapSpec>(arena::MapSpec::load(a.map));
    }
    if (!a.opponent.empty()) {
        scenario.opponent = load_tree(a.opponent, io.in);
    }
    if (a.ticks > 0) {
        scenario.max_ticks = a.ticks;
    }
    arena::EpisodeResult result;
    if (!a.library.empty()) {
        if (a.scheduler_weights.empty()) {
            throw Error("usage", "--library needs --scheduler weights");
        }
        const auto lib = scheduler::PolicyLibrary::load(a.library);
        const auto params = std::make_shared<const neural::NetParams>(neural::load_params_file(a.scheduler_weights));
        const auto r = scheduler::run_scheduled_episode(scenario, lib.compile(), scheduler::net_selector(params, lib.size()),
                                                        {a.review_period}, a.seed);
        for (const auto& s : r.switches) {
            io.err << "tick " << s.tick << ": agent " << s.agent << " switched " << lib.at(s.from).description
                   << " -> " << lib.at(s.to).description << "\n";
        }
        result = r.episode;
    } else {
        const auto weights = a.weights.empty() ? fps::TaskWeights{} : fps::load_task_weights(a.weights);
        std::vector<dsl::BtNode> trees;
        for (const auto& p : a.trees) {
            trees.push_back(load_tree(p, io.in));
        }
        std::vector<std::unique_ptr<btree::PolicyAgent>> agents;
        std::vector<arena::AgentController*> team0;
        for (int i = 0; i < scenario.team_sizes[0]; ++i) {
            const auto& tree = trees[static_cast<std::size_t>(i) % trees.size()];
            agents.push_back(std::make_unique<btree::PolicyAgent>(fps::compile_shooter(tree, weights)));
            team0.push_back(agents.back().get());
        }
        result = fps::run_scenario(scenario, team0, a.seed);
    }
    render(result.trace, a.render, io);
    if (!a.replay_out.empty()) {
        arena::save_replay(result.trace, a.replay_out);
    }
    io.out << result.metrics.to_json() << "\n";
    return kExitOk;
}

int cmd_replay(const std::string& path, const RenderArgs& r, Streams io) {
    const auto trace = arena::load_replay(path);
    render(trace, r, io);
    ordered_json j;
    j["frames"] = trace.frames.size();
    j["seed"] = trace.seed;
    j["trace_hash"] = hex64(arena::trace_hash(trace));
    j["reproduces"] = arena::resimulate(trace) == trace;
    auto& teams = j["tactical"] = ordered_json::array();
    for (int t = 0; t < arena::kTeamCount; ++t) {
        const auto rep = search::tactical_analysis(trace, t);
        ordered_json tj;
        for (int d = 0; d < search::kDimensionCount; ++d) {
            tj[std::string(search::to_string(static_cast<search::Dimension>(d)))] = rep.scores[static_cast<std::size_t>(d)];
        }
        teams.push_back(tj);
    }
    io.out << j.dump() << "\n";
    return kExitOk;
}

// ---- search -----------------------------------------------------------

struct SearchArgs {
    std::string config;
    std::string out;
    bool resume = false;
    int jobs = 0;
    int stop_after = -1;
};

ordered_json tactical_entry(const search::TacticalReport& r) {
    ordered_json scores;
    ordered_json notes;
    for (int d = 0; d < search::kDimensionCount; ++d) {
        const std::string key(search::to_string(static_cast<search::Dimension>(d)));
        scores[key] = r.scores[static_cast<std::size_t>(d)];
        notes[key] = r.notes[static_cast<std::size_t>(d)];
    }
    return {{"scores", scores}, {"notes", notes}};
}

// Tactical reports of the best-so-far tree after every iteration.
std::string tactical_reports(const search::SearchState& state, const search::EvalConfig& eval) {
    auto cfg = eval;
    cfg.tactical = true;
    std::map<int, search::TacticalReport> cache;
    ordered_json out = ordered_json::array();
    for (std::size_t t = 0; t < state.elite.size(); ++t) {
        if (!state.elite[t]) {
            continue;
        }
        const int id = *state.elite[t];
        const auto& c = state.candidates.at(static_cast<std::size_t>(id));
        if (!cache.count(id)) {
            cache[id] = c.eval && c.eval->tactical ? *c.eval->tactical
                                                   : *search::evaluate_tree(dsl::parse_or_throw(c.dsl), cfg).tactical;
        }
        auto e = tactical_entry(cache[id]);
        e["iteration"] = t;
        e["candidate"] = id;
        e["reward"] = c.reward() ? ordered_json(*c.reward()) : ordered_json(nullptr);
        out.push_back(e);
    }
    return out.dump(2) + "\n";
}

int cmd_search(const SearchArgs& a, Streams io) {
    const auto doc = ConfigDocument::load(a.config);
    auto job = search_job(doc);
    if (a.jobs > 0) {
        job.search.jobs = a.jobs;
    }
    const fs::path out = a.out.empty() ? fs::path(job.output_dir) : fs::path(a.out);
    make_dir(out);
    const auto hash = search::config_hash(job.search);
    const auto checkpoint = out / "checkpoint.json";

    search::SearchOptions opts;
    opts.checkpoint_path = checkpoint.string();
    opts.stop_after = a.stop_after;
    if (a.resume) {
        opts.resume = search::state_from_json(read_input(checkpoint.string(), io.in), hash);
        io.err << "resuming at iteration " << opts.resume->next_iteration << "\n";
    }
    opts.on_iteration = [&](const search::SearchState& s) {
        const auto curve = s.best_curve();
        io.err << "iteration " << s.next_iteration - 1 << ": best ";
        if (curve.back()) {
            io.err << *curve.back();
        } else {
            io.err << "none";
        }
        io.err << "\n";
    };

    auto manifest = manifest_json("search", a.config, read_input(a.config, io.in), out, job.search.eval.seed);
    manifest["config_hash"] = hash;
    write_file(out / "manifest.json", manifest.dump(2) + "\n");

    const auto catalog = fps::shooter_catalog();
    auto generator = genkit::make_generator(job.generator, catalog, job.seed_tree);
    const auto result = search::bfs_search(job.search, *generator, catalog, opts);

    const auto& state = result.state;
    write_file(out / "candidates.csv", search::candidates_csv(state));
    write_file(out / "reward_curve.csv", search::reward_curve_csv(state));
    write_file(out / "reward_plot.svg", search::reward_plot_svg(state));
    if (!state.candidates.empty()) {
        search::export_trajectories(search::trajectory_records(state), (out / "trajectories.jsonl").string());
    }
    ordered_json summary;
    summary["complete"] = result.complete;
    summary["iterations"] = state.next_iteration;
    summary["candidates"] = state.candidates.size();
    if (result.best) {
        const auto tree = dsl::parse_or_throw(result.best->dsl);
        const auto tree_json = dsl::to_json(tree);
        write_file(out / "best.bt", result.best->dsl);
        write_file(out / "best.json", tree_json + "\n");
        write_file(out / "tactical.json", tactical_reports(state, job.search.eval));
        summary["best_reward"] = *result.best->reward();
        summary["best_iteration"] = result.best->iteration;
        summary["best_hash"] = hash_of(tree_json);
    } else {
        summary["best_reward"] = nullptr;
    }
    summary["output"] = out.string();
    io.out << summary.dump() << "\n";
    return kExitOk;
}

// ---- train ------------------------------------------------------------

int train_task_node(const std::string& spec, Streams io) {
    const auto doc = ConfigDocument::load(spec);
    const auto job = task_node_job(doc);
    const fs::path out(job.output_dir);
    make_dir(out);
    write_file(out / "manifest.json",
               manifest_json("train task-node", spec, read_input(spec, io.in), out, job.train.seed).dump(2) + "\n");

    neural::TrainReport report;
    neural::NetParams params;
    if (job.task == "move_to") {
        neural::MoveToEnvironment env(neural::wall_map_sampler());
        params = neural::train_task_node(env, job.train, &report);
    } else {
        neural::ShootEnvironment env(neural::wall_map_sampler());
        params = neural::train_task_node(env, job.train, &report);
    }
    const auto weights_path = out / (job.task + ".pnet");
    neural::save_params_file(params, weights_path.string());
    std::ostringstream curve;
    curve << "iteration,mean_return\n";
    for (std::size_t i = 0; i < report.mean_return.size(); ++i) {
        curve << i << "," << report.mean_return[i] << "\n";
    }
    write_file(out / (job.task + "_curve.csv"), curve.str());

    const auto bytes = neural::save_params(params);
    ordered_json j;
    j["task"] = job.task;
    j["iterations"] = report.mean_return.size();
    j["final_mean_return"] = report.mean_return.empty() ? ordered_json(nullptr) : ordered_json(report.mean_return.back());
    j["weights"] = weights_path.string();
    j["weights_hash"] = hex64(fnv1a64(bytes));
    if (job.task == "move_to" && job.benchmark_episodes > 0) {
        // Benchmark what was saved, float32 rounding included.
        const auto saved = neural::load_params(bytes);
        const auto b = neural::benchmark_move_to(saved, neural::wall_map_sampler(), job.benchmark_episodes,
                                                 derive_seed(job.train.seed, "benchmark"));
        j["benchmark"] = {{"episodes", b.episodes}, {"successes", b.successes}, {"mean_ratio", b.mean_ratio}};
    }
    io.out << j.dump() << "\n";
    return kExitOk;
}

int train_scheduler(const std::string& spec, Streams io) {
    const auto doc = ConfigDocument::load(spec);
    const auto job = scheduler_job(doc);
    const fs::path out(job.output_dir);
    make_dir(out);
    write_file(out / "manifest.json",
               manifest_json("train scheduler", spec, read_input(spec, io.in), out, job.train.seed).dump(2) + "\n");

    scheduler::SchedulerTrainReport report;
    const auto params = scheduler::train_scheduler(job.library, job.suite, job.train, &report);
    for (const auto& w : report.warnings) {
        io.err << "warning: " << w << "\n";
    }
    neural::save_params_file(params, (out / "scheduler.pnet").string());
    write_file(out / "library.json", job.library.to_manifest() + "\n");
    std::ostringstream loss;
    loss << "iteration,loss\n";
    for (std::size_t i = 0; i < report.loss.size(); ++i) {
        loss << i << "," << report.loss[i] << "\n";
    }
    write_file(out / "loss_curve.csv", loss.str());

    const auto cmp = scheduler::compare_on_suite(params, job.library, job.suite, job.train);
    write_file(out / "suite.csv", cmp.to_table());
    io.err << "train accuracy " << report.train_accuracy << ", held-out selection accuracy " << cmp.selection_accuracy
           << (cmp.dominates() ? ", scheduler beats every fixed tree\n" : ", scheduler does not beat every fixed tree\n");
    io.out << cmp.to_table();
    return kExitOk;
}

// ---- dispatch ---------------------------------------------------------

int dispatch(const std::vector<std::string>& args, Streams io) {
    CLI::App app{"Behavior tree policies for a grid shooter", "bta"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version());

    TreeArgs tree_args;
    auto* tree = app.add_subcommand("tree", "Check, format and convert trees")->require_subcommand(1);
    std::string tree_sub;
    for (const char* name : {"check", "fmt", "to-json", "from-json"}) {
        auto* sub = tree->add_subcommand(name);
        sub->add_option("paths", tree_args.paths, "Input files, '-' for stdin")->required();
        if (std::string(name) == "check") {
            sub->add_option("--catalog", tree_args.catalog, "Node catalog JSON (default: shooter catalog)");
        }
        if (std::string(name) == "fmt") {
            sub->add_flag("-w,--write", tree_args.write, "Rewrite files in place");
        }
        sub->callback([&tree_sub, name] { tree_sub = name; });
    }

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Play one episode and print its metrics as JSON");
    run->add_option("--tree", run_args.trees, "Team-0 tree(s), assigned round robin");
    run->add_option("--library", run_args.library, "Library manifest for a scheduled run");
    run->add_option("--scheduler", run_args.scheduler_weights, "Scheduler weights (.pnet)");
    run->add_option("--review-period", run_args.review_period)->check(CLI::PositiveNumber);
    run->add_option("--scenario", run_args.scenario)->check(CLI::IsMember(scenario_names()));
    run->add_option("--map", run_args.map, "Replace the scenario map");
    run->add_option("--opponent", run_args.opponent, "Replace the opponent tree");
    run->add_option("--weights", run_args.weights, "Directory with task-node weights");
    run->add_option("--seed", run_args.seed);
    run->add_option("--ticks", run_args.ticks)->check(CLI::PositiveNumber);
    run->add_option("--render", run_args.render.mode)->check(CLI::IsMember({"ascii", "svg"}));
    run->add_option("--frames-dir", run_args.render.frames_dir, "Output directory for --render svg");
    run->add_option("--stride", run_args.render.stride)->check(CLI::PositiveNumber);
    run->add_option("--replay-out", run_args.replay_out);

    std::string replay_path;
    RenderArgs replay_render;
    auto* replay = app.add_subcommand("replay", "Inspect a recorded replay");
    replay->add_option("path", replay_path)->required();
    replay->add_option("--render", replay_render.mode)->check(CLI::IsMember({"ascii", "svg"}));
    replay->add_option("--frames-dir", replay_render.frames_dir);
    replay->add_option("--stride", replay_render.stride)->check(CLI::PositiveNumber);

    SearchArgs search_args;
    auto* search = app.add_subcommand("search", "Run the iterative tree search from a config file");
    search->add_option("config", search_args.config)->required();
    search->add_option("--out", search_args.out, "Output directory (default: search.output)");
    search->add_flag("--resume", search_args.resume, "Continue from the output directory's checkpoint");
    search->add_option("--jobs", search_args.jobs)->check(CLI::PositiveNumber);
    search->add_option("--stop-after", search_args.stop_after, "Stop after this many iterations");

    std::string spec;
    auto* train = app.add_subcommand("train", "Train task nodes or the scheduler")->require_subcommand(1);
    auto* train_task = train->add_subcommand("task-node");
    train_task->add_option("spec", spec)->required();
    auto* train_sched = train->add_subcommand("scheduler");
    train_sched->add_option("spec", spec)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, io.out, io.err) == 0 ? kExitOk : kExitUsage;
    }

    if (tree->parsed()) {
        if (tree_sub == "check") {
            return tree_check(tree_args, io);
        }
        if (tree_sub == "fmt") {
            return tree_fmt(tree_args, io);
        }
        if (tree_sub == "to-json") {
            return tree_to_json(tree_args, io);
        }
        return tree_from_json(tree_args, io);
    }
    if (run->parsed()) {
        return cmd_run(run_args, io);
    }
    if (replay->parsed()) {
        return cmd_replay(replay_path, replay_render, io);
    }
    if (search->parsed()) {
        return cmd_search(search_args, io);
    }
    if (train_task->parsed()) {
        return train_task_node(spec, io);
    }
    return train_scheduler(spec, io);
}

}  // namespace

std::string version() { return BTA_VERSION; }

int exit_code(const Error& e) {
    const auto& c = e.code();
    if (c == "diverged") {
        return kExitDiverged;
    }
    if (dynamic_cast<const dsl::ParseError*>(&e) || c == "bad-schema" || c == "invalid-tree") {
        return kExitInvalid;
    }
    return kExitUsage;
}

int run_cli(const std::vector<std::string>& args, Streams io) {
    try {
        return dispatch(args, io);
    } catch (const dsl::ParseError& e) {
        for (const auto& d : e.diagnostics()) {
            io.err << dsl::format_diagnostic(d) << "\n";
        }
        return exit_code(e);
    } catch (const Error& e) {
        io.err << "error: " << e.what() << "\n";
        return exit_code(e);
    } catch (const std::exception& e) {
        io.err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace bta::cli
