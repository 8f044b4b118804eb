#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bta/dsl/ast.hpp"
#include "bta/dsl/catalog.hpp"
#include "bta/genkit/generator.hpp"
#include "bta/search/evaluate.hpp"

namespace bta::search {

struct SearchConfig {
    int n = 8;           // candidates per iteration
    int k = 2;           // retained per iteration
    int iterations = 10;
    EvalConfig eval;
    int jobs = 1;
    std::string scenario_text;  // "Game Scenario" prompt section
    std::string tactics_text;   // "Tactics" prompt section
    // Mixed into the config hash; callers put generator settings here.
    std::string fingerprint;

    // Throws bta::Error("bad-config").
    void check() const;
};

// Stable digest of everything that influences the search outcome.
std::string config_hash(const SearchConfig& config);

struct Candidate {
    int id = 0;
    int iteration = 0;
    std::optional<int> parent;
    std::string prompt;
    std::string dsl;  // canonical when valid, as extracted otherwise
    bool valid = false;
    std::vector<std::string> diagnostics;
    std::optional<Evaluation> eval;  // present iff valid

    std::optional<double> reward() const;
    bool operator==(const Candidate&) const = default;
};

struct SearchState {
    int next_iteration = 0;
    std::vector<Candidate> candidates;  // append-only, id == index
    std::vector<std::vector<int>> retained;  // per finished iteration, rank order
    std::vector<std::optional<int>> elite;   // best-ever id after each iteration

    // Best-ever reward after each finished iteration.
    std::vector<std::optional<double>> best_curve() const;
    bool operator==(const SearchState&) const = default;
};

std::string state_to_json(const SearchState& state, const std::string& hash);
// Throws bta::Error("bad-checkpoint") on malformed input or hash mismatch.
SearchState state_from_json(const std::string& text, const std::string& expected_hash);

struct SearchOptions {
    std::string checkpoint_path;  // written after every iteration when set
    std::optional<SearchState> resume;
    int stop_after = -1;  // stop once this many iterations are done
    std::function<void(const SearchState&)> on_iteration;
};

struct SearchResult {
    SearchState state;
    std::optional<Candidate> best;
    bool complete = false;
};

// Ranking: reward descending, then earlier iteration, then DSL text, then id.
bool ranks_before(const Candidate& a, const Candidate& b);

// Children per parent in rank order: ceil(n / parents) each until n is used.
std::vector<int> split_children(int n, int parents);

// Throws whatever the generator throws; bta::Error("generator-unavailable")
// leaves a checkpoint of the last finished iteration behind first.
SearchResult bfs_search(const SearchConfig& config, genkit::Generator& generator, const dsl::NodeCatalog& catalog,
                        const SearchOptions& options = {});

}  // namespace bta::search
