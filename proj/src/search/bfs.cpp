#include "bta/search/bfs.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "bta/core/error.hpp"
#include "bta/core/hash.hpp"
#include "bta/core/rng.hpp"
#include "bta/dsl/parser.hpp"
#include "bta/dsl/printer.hpp"
#include "bta/dsl/validate.hpp"
#include "bta/genkit/prompt.hpp"
#include "bta/search/feedback.hpp"
#include "json_support.hpp"

namespace bta::search {

using detail::json;

void SearchConfig::check() const {
    if (n < 1 || k < 1 || k > n) {
        throw Error("bad-config", "need 1 <= k <= n (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
    }
    if (iterations < 1) {
        throw Error("bad-config", "iterations must be >= 1");
    }
    if (eval.episodes < 3) {
        throw Error("bad-config", "episodes per candidate must be >= 3");
    }
    if (eval.scenarios.empty()) {
        throw Error("bad-config", "no scenarios to evaluate on");
    }
    if (jobs < 1) {
        throw Error("bad-config", "jobs must be >= 1");
    }
}

std::string config_hash(const SearchConfig& config) {
    json scenarios = json::array();
    for (const auto& s : config.eval.scenarios) {
        scenarios.push_back({{"name", s.name},
                             {"map", s.map ? s.map->to_text() : std::string()},
                             {"teams", {s.team_sizes[0], s.team_sizes[1]}},
                             {"max_ticks", s.max_ticks},
                             {"opponent", s.opponent ? dsl::to_canonical_dsl(*s.opponent) : std::string()}});
    }
    const json j{{"n", config.n},
                 {"k", config.k},
                 {"iterations", config.iterations},
                 {"episodes", config.eval.episodes},
                 {"seed", config.eval.seed},
                 {"objective", config.eval.objective.name()},
                 {"tactical", config.eval.tactical},
                 {"weights", config.eval.weights.fingerprint()},
                 {"scenarios", scenarios},
                 {"scenario_text", config.scenario_text},
                 {"tactics_text", config.tactics_text},
                 {"fingerprint", config.fingerprint}};
    return hex64(fnv1a64(j.dump()));
}

std::optional<double> Candidate::reward() const {
    if (!eval) {
        return std::nullopt;
    }
    return eval->reward;
}

std::vector<std::optional<double>> SearchState::best_curve() const {
    std::vector<std::optional<double>> out;
    for (const auto& e : elite) {
        out.push_back(e ? candidates.at(static_cast<std::size_t>(*e)).reward() : std::nullopt);
    }
    return out;
}

bool ranks_before(const Candidate& a, const Candidate& b) {
    const auto ra = a.reward();
    const auto rb = b.reward();
    if (ra.has_value() != rb.has_value()) {
        return ra.has_value();
    }
    if (ra && *ra != *rb) {
        return *ra > *rb;
    }
    if (a.iteration != b.iteration) {
        return a.iteration < b.iteration;
    }
    if (a.dsl != b.dsl) {
        return a.dsl < b.dsl;
    }
    return a.id < b.id;
}

std::vector<int> split_children(int n, int parents) {
    std::vector<int> out;
    if (parents <= 0) {
        return out;
    }
    const int each = (n + parents - 1) / parents;
    for (int p = 0; p < parents && n > 0; ++p) {
        out.push_back(std::min(each, n));
        n -= out.back();
    }
    out.resize(static_cast<std::size_t>(parents), 0);
    return out;
}

// ---- checkpoint -----------------------------------------------------------

namespace {

json eval_json(const Evaluation& e) {
    return {{"reward", e.reward},
            {"fallback", e.fallback},
            {"undefined_episodes", e.undefined_episodes},
            {"summary", detail::summary_json(e.summary)},
            {"tactical", e.tactical ? detail::tactical_json(*e.tactical) : json(nullptr)},
            {"trace_hashes", e.trace_hashes}};
}

Evaluation eval_from_json(const json& j) {
    Evaluation e;
    e.reward = j.at("reward").get<double>();
    e.fallback = j.at("fallback").get<bool>();
    e.undefined_episodes = j.at("undefined_episodes").get<int>();
    e.summary = detail::summary_from_json(j.at("summary"));
    if (!j.at("tactical").is_null()) {
        e.tactical = detail::tactical_from_json(j.at("tactical"));
    }
    e.trace_hashes = j.at("trace_hashes").get<std::vector<std::uint64_t>>();
    return e;
}

json candidate_json(const Candidate& c) {
    return {{"id", c.id},
            {"iteration", c.iteration},
            {"parent", c.parent ? json(*c.parent) : json(nullptr)},
            {"prompt", c.prompt},
            {"dsl", c.dsl},
            {"valid", c.valid},
            {"diagnostics", c.diagnostics},
            {"eval", c.eval ? eval_json(*c.eval) : json(nullptr)}};
}

Candidate candidate_from_json(const json& j) {
    Candidate c;
    c.id = j.at("id").get<int>();
    c.iteration = j.at("iteration").get<int>();
    if (!j.at("parent").is_null()) {
        c.parent = j.at("parent").get<int>();
    }
    c.prompt = j.at("prompt").get<std::string>();
    c.dsl = j.at("dsl").get<std::string>();
    c.valid = j.at("valid").get<bool>();
    c.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    if (!j.at("eval").is_null()) {
        c.eval = eval_from_json(j.at("eval"));
    }
    return c;
}

}  // namespace

std::string state_to_json(const SearchState& state, const std::string& hash) {
    json candidates = json::array();
    for (const auto& c : state.candidates) {
        candidates.push_back(candidate_json(c));
    }
    json elite = json::array();
    for (const auto& e : state.elite) {
        elite.push_back(e ? json(*e) : json(nullptr));
    }
    const json j{{"format", "bta-search-checkpoint"},
                 {"config_hash", hash},
                 {"next_iteration", state.next_iteration},
                 {"candidates", candidates},
                 {"retained", state.retained},
                 {"elite", elite}};
    return j.dump(1) + "\n";
}

SearchState state_from_json(const std::string& text, const std::string& expected_hash) {
    SearchState s;
    try {
        const auto j = json::parse(text);
        if (j.at("format") != "bta-search-checkpoint") {
            throw Error("bad-checkpoint", "not a search checkpoint");
        }
        const auto hash = j.at("config_hash").get<std::string>();
        if (hash != expected_hash) {
            throw Error("bad-checkpoint", "checkpoint was written for config " + hash + ", current config is " +
                                              expected_hash);
        }
        s.next_iteration = j.at("next_iteration").get<int>();
        for (const auto& c : j.at("candidates")) {
            s.candidates.push_back(candidate_from_json(c));
        }
        s.retained = j.at("retained").get<std::vector<std::vector<int>>>();
        for (const auto& e : j.at("elite")) {
            s.elite.push_back(e.is_null() ? std::nullopt : std::optional<int>(e.get<int>()));
        }
    } catch (const json::exception& e) {
        throw Error("bad-checkpoint", e.what());
    }
    const auto n = static_cast<int>(s.candidates.size());
    for (int i = 0; i < n; ++i) {
        if (s.candidates[static_cast<std::size_t>(i)].id != i) {
            throw Error("bad-checkpoint", "candidate ids are not sequential");
        }
    }
    if (s.retained.size() != static_cast<std::size_t>(s.next_iteration) || s.elite.size() != s.retained.size()) {
        throw Error("bad-checkpoint", "iteration bookkeeping does not match next_iteration");
    }
    for (const auto& r : s.retained) {
        for (int id : r) {
            if (id < 0 || id >= n) {
                throw Error("bad-checkpoint", "retained id out of range");
            }
        }
    }
    for (const auto& e : s.elite) {
        if (e && (*e < 0 || *e >= n)) {
            throw Error("bad-checkpoint", "elite id out of range");
        }
    }
    return s;
}

// ---- search loop ----------------------------------------------------------

namespace {

struct Request {
    std::optional<int> parent;
    int count = 0;
    genkit::GenerationRequest gen;
};

std::string format_errors_text(const std::vector<const Candidate*>& invalid) {
    if (invalid.empty()) {
        return "No format errors in the last round.";
    }
    std::string out = "Format errors in the last round:\n";
    for (const auto* c : invalid) {
        for (const auto& d : c->diagnostics) {
            out += "- " + d + "\n";
        }
    }
    return out;
}

class Search {
public:
    Search(const SearchConfig& config, genkit::Generator& generator, const dsl::NodeCatalog& catalog,
           const SearchOptions& options)
        : config_(config), generator_(generator), catalog_(catalog), options_(options), hash_(config_hash(config)) {}

    SearchResult run() {
        if (options_.resume) {
            state_ = *options_.resume;
            for (auto& c : state_.candidates) {
                if (c.eval) {
                    cache_.emplace(c.dsl, *c.eval);
                }
            }
        }
        int done_here = 0;
        while (state_.next_iteration < config_.iterations) {
            if (options_.stop_after >= 0 && state_.next_iteration >= options_.stop_after) {
                break;
            }
            iterate(state_.next_iteration);
            ++done_here;
            if (!options_.checkpoint_path.empty()) {
                detail::write_text_file(options_.checkpoint_path, state_to_json(state_, hash_));
            }
            if (options_.on_iteration) {
                options_.on_iteration(state_);
            }
        }
        SearchResult result;
        result.state = state_;
        result.complete = state_.next_iteration >= config_.iterations;
        if (!state_.elite.empty() && state_.elite.back()) {
            result.best = state_.candidates.at(static_cast<std::size_t>(*state_.elite.back()));
        }
        return result;
    }

private:
    const Candidate& cand(int id) const { return state_.candidates.at(static_cast<std::size_t>(id)); }

    std::vector<int> parents_for(int t) const {
        if (t == 0) {
            return {};
        }
        auto parents = state_.retained.at(static_cast<std::size_t>(t - 1));
        const auto elite = state_.elite.at(static_cast<std::size_t>(t - 1));
        if (elite && std::find(parents.begin(), parents.end(), *elite) == parents.end()) {
            parents.push_back(*elite);
        }
        return parents;
    }

    std::string tactics_for(const Candidate& parent) const {
        std::optional<MetricsSummary> baseline;
        if (parent.parent && cand(*parent.parent).eval) {
            baseline = cand(*parent.parent).eval->summary;
        }
        return config_.tactics_text + "\n\nResults of the previous tree:\n" +
               evaluation_feedback(*parent.eval, baseline);
    }

    std::vector<Request> plan(int t) {
        const auto parents = parents_for(t);
        // Invalid children of the last round, grouped by their parent.
        std::map<std::optional<int>, std::vector<const Candidate*>> invalid;
        if (t > 0) {
            for (const auto& c : state_.candidates) {
                if (c.iteration == t - 1 && !c.valid) {
                    const bool lineage_alive =
                        c.parent && std::find(parents.begin(), parents.end(), *c.parent) != parents.end();
                    invalid[lineage_alive ? c.parent : std::nullopt].push_back(&c);
                }
            }
        }
        std::vector<Request> out;
        const auto counts = split_children(config_.n, static_cast<int>(parents.size()));
        for (std::size_t i = 0; i < parents.size(); ++i) {
            if (counts[i] == 0) {
                continue;
            }
            const auto& p = cand(parents[i]);
            auto errors = invalid[p.id];
            // Errors whose lineage died go to the strongest parent.
            if (i == 0) {
                const auto& orphans = invalid[std::nullopt];
                errors.insert(errors.end(), orphans.begin(), orphans.end());
            }
            genkit::PromptInputs inputs{config_.scenario_text, tactics_for(p),
                                        genkit::PromptHistory{p.dsl, format_errors_text(errors)}};
            Request r;
            r.parent = p.id;
            r.count = counts[i];
            r.gen.prompt = genkit::render_prompt(catalog_, inputs);
            r.gen.base = dsl::parse_or_throw(p.dsl);
            r.gen.salt = derive_seed(derive_seed(0x9e3779b97f4a7c15ULL, static_cast<std::uint64_t>(t)),
                                     static_cast<std::uint64_t>(p.id));
            out.push_back(std::move(r));
        }
        if (parents.empty()) {
            genkit::PromptInputs inputs{config_.scenario_text, config_.tactics_text, std::nullopt};
            const auto& orphans = invalid[std::nullopt];
            if (!orphans.empty()) {
                const std::string shown = orphans.front()->dsl.empty() ? "(no tree was found in the response)"
                                                                       : orphans.front()->dsl;
                inputs.history = genkit::PromptHistory{shown, format_errors_text(orphans)};
            }
            Request r;
            r.count = config_.n;
            r.gen.prompt = genkit::render_prompt(catalog_, inputs);
            r.gen.salt = derive_seed(derive_seed(0x9e3779b97f4a7c15ULL, static_cast<std::uint64_t>(t)), "fresh");
            out.push_back(std::move(r));
        }
        return out;
    }

    Candidate make_candidate(int id, int t, const Request& r, const genkit::GenerationRecord& rec) {
        Candidate c;
        c.id = id;
        c.iteration = t;
        c.parent = r.parent;
        c.prompt = r.gen.prompt;
        if (!rec.dsl) {
            c.diagnostics.push_back("error[no-dsl]: no behavior tree found in the response");
            if (rec.flagged("malformed-tags")) {
                c.diagnostics.push_back("error[malformed-tags]: unbalanced or overlapping response tags");
            }
            return c;
        }
        c.dsl = *rec.dsl;
        auto parsed = dsl::parse(*rec.dsl);
        for (const auto& d : parsed.diagnostics) {
            c.diagnostics.push_back(dsl::format_diagnostic(d));
        }
        if (!parsed.ok()) {
            return c;
        }
        const auto diags = dsl::validate(*parsed.tree, catalog_);
        for (const auto& d : diags) {
            c.diagnostics.push_back(dsl::format_diagnostic(d));
        }
        if (dsl::has_errors(diags)) {
            return c;
        }
        c.valid = true;
        c.dsl = dsl::to_canonical_dsl(*parsed.tree);
        return c;
    }

    void iterate(int t) {
        const auto requests = plan(t);
        std::vector<Candidate> fresh;
        for (const auto& r : requests) {
            std::vector<genkit::GenerationRecord> records;
            try {
                records = generator_.generate(r.gen, r.count);
            } catch (const Error& e) {
                if (e.code() == "generator-unavailable" && !options_.checkpoint_path.empty()) {
                    detail::write_text_file(options_.checkpoint_path, state_to_json(state_, hash_));
                }
                throw;
            }
            for (const auto& rec : records) {
                const auto id = static_cast<int>(state_.candidates.size() + fresh.size());
                fresh.push_back(make_candidate(id, t, r, rec));
            }
        }

        // Validity firewall: only valid trees reach the arena; duplicates
        // reuse the earlier evaluation.
        std::vector<dsl::BtNode> todo;
        std::vector<std::string> todo_dsl;
        for (const auto& c : fresh) {
            if (c.valid && !cache_.count(c.dsl) &&
                std::find(todo_dsl.begin(), todo_dsl.end(), c.dsl) == todo_dsl.end()) {
                todo.push_back(dsl::parse_or_throw(c.dsl));
                todo_dsl.push_back(c.dsl);
            }
        }
        const auto evals = evaluate_many(todo, config_.eval, config_.jobs);
        for (std::size_t i = 0; i < evals.size(); ++i) {
            cache_.emplace(todo_dsl[i], evals[i]);
        }
        for (auto& c : fresh) {
            if (c.valid) {
                c.eval = cache_.at(c.dsl);
            }
            state_.candidates.push_back(std::move(c));
        }

        std::vector<int> ranked;
        for (const auto& c : state_.candidates) {
            if (c.iteration == t && c.valid) {
                ranked.push_back(c.id);
            }
        }
        std::stable_sort(ranked.begin(), ranked.end(),
                         [&](int a, int b) { return ranks_before(cand(a), cand(b)); });
        if (ranked.size() > static_cast<std::size_t>(config_.k)) {
            ranked.resize(static_cast<std::size_t>(config_.k));
        }
        std::optional<int> elite = t > 0 ? state_.elite.back() : std::nullopt;
        if (!ranked.empty() && (!elite || ranks_before(cand(ranked.front()), cand(*elite)))) {
            elite = ranked.front();
        }
        state_.retained.push_back(std::move(ranked));
        state_.elite.push_back(elite);
        state_.next_iteration = t + 1;
    }

    const SearchConfig& config_;
    genkit::Generator& generator_;
    const dsl::NodeCatalog& catalog_;
    const SearchOptions& options_;
    std::string hash_;
    SearchState state_;
    std::map<std::string, Evaluation> cache_;
};

}  // namespace

SearchResult bfs_search(const SearchConfig& config, genkit::Generator& generator, const dsl::NodeCatalog& catalog,
                        const SearchOptions& options) {
    config.check();
    return Search(config, generator, catalog, options).run();
}

}  // namespace bta::search
