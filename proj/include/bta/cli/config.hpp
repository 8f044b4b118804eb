#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "bta/genkit/generator.hpp"
#include "bta/neural/train.hpp"
#include "bta/scheduler/train.hpp"
#include "bta/search/bfs.hpp"

namespace bta::cli {

// The TOML subset we read: [section] headers, `key = value` lines, # comments,
// and values that are basic strings, integers, floats, booleans or flat
// string arrays. Keys are stored as "section.key".
using ConfigValue = std::variant<bool, std::int64_t, double, std::string, std::vector<std::string>>;

class ConfigDocument {
public:
    // Throws bta::Error("bad-config") naming the line.
    static ConfigDocument parse(const std::string& text);
    // Throws bta::Error("io"); relative paths in the document resolve against
    // the file's directory.
    static ConfigDocument load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::vector<std::string> keys() const;

    // Typed access with defaults. A present value of the wrong type throws
    // bta::Error("bad-config") naming the key.
    std::string get_string(const std::string& key, const std::string& fallback = "") const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;  // integers accepted
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::string> get_list(const std::string& key, const std::vector<std::string>& fallback = {}) const;
    // get_string resolved against base_dir(); empty when absent.
    std::string get_path(const std::string& key) const;

    // Throws bta::Error("unknown-key") whose message is the offending key.
    void require_known(const std::set<std::string>& allowed) const;

    const std::string& base_dir() const { return base_dir_; }
    void set_base_dir(std::string dir) { base_dir_ = std::move(dir); }

private:
    std::map<std::string, ConfigValue> values_;
    std::string base_dir_;
};

// Built-in scenarios: kill_range, team, open_field, corridor.
fps::Scenario scenario_by_name(const std::string& name);
const std::vector<std::string>& scenario_names();

// Everything `bta search` needs, resolved from one document.
struct SearchJob {
    search::SearchConfig search;
    genkit::GeneratorConfig generator;
    dsl::BtNode seed_tree;
    std::string weights_dir;  // empty: rule-based tasks
    std::string output_dir;
};

// Keys: [search] n k iterations episodes seed objective jobs tactics scenario
//       seed_tree weights output
//       [generator] mode seed url model temperature max_tokens timeout retries
//       system_prompt
//       [arena] scenarios ticks map
SearchJob search_job(const ConfigDocument& doc);

struct TaskNodeJob {
    std::string task;  // move_to or shoot
    neural::TrainConfig train;
    int benchmark_episodes = 100;
    std::string output_dir;
};

// Keys: [train] task hidden learning_rate iterations episodes_per_iteration
//       gamma seed benchmark_episodes output
TaskNodeJob task_node_job(const ConfigDocument& doc);

struct SchedulerJob {
    scheduler::PolicyLibrary library;
    std::vector<fps::Scenario> suite;
    scheduler::SchedulerTrainConfig train;
    std::string output_dir;
};

// Keys: [scheduler] library suite episodes seed hidden iterations
//       learning_rate review_period output
//       [arena] ticks
SchedulerJob scheduler_job(const ConfigDocument& doc);

}  // namespace bta::cli
