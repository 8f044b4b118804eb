#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bta/search/bfs.hpp"

namespace bta::search {

// One line of the fine-tuning dataset: what was asked, what came back, and
// how it scored.
struct TrajectoryRecord {
    int t = 0;
    std::string prompt;
    std::string dsl;
    std::optional<double> reward;
    std::optional<TacticalReport> tactical;  // scores only; notes are not exported
    bool valid = false;
    std::vector<std::string> diagnostics;

    bool operator==(const TrajectoryRecord&) const = default;
};

// Candidates in id order, i.e. the order the loop produced them.
std::vector<TrajectoryRecord> trajectory_records(const SearchState& state);

std::string to_jsonl(const std::vector<TrajectoryRecord>& records);
std::vector<TrajectoryRecord> from_jsonl(const std::string& text);

// Throws bta::Error("empty-history") for no records and ("io") naming the
// path when it cannot be written or read.
void export_trajectories(const std::vector<TrajectoryRecord>& records, const std::string& path);
std::vector<TrajectoryRecord> load_trajectories(const std::string& path);

// id,iteration,parent,valid,reward,fallback,kills,deaths,damage,retained,dsl_hash
std::string candidates_csv(const SearchState& state);
// iteration,best_reward,iteration_best,iteration_mean,valid,invalid
std::string reward_curve_csv(const SearchState& state);
// Reward against iteration: every scored candidate as a light dot, the
// best-ever curve as a solid line.
std::string reward_plot_svg(const SearchState& state);

}  // namespace bta::search
