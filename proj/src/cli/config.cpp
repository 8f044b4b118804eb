#include "bta/cli/config.hpp"

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bta/core/error.hpp"
#include "bta/dsl/dsl.hpp"
#include "bta/fps/catalog.hpp"
#include "bta/fps/scenarios.hpp"
#include "bta/scheduler/library.hpp"

namespace bta::cli {
namespace {

namespace fs = std::filesystem;

[[noreturn]] void fail_line(int line, const std::string& what) {
    throw Error("bad-config", "line " + std::to_string(line) + ": " + what);
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
    }
    return std::string(s.substr(b, e - b));
}

bool bare_key_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

bool bare_key(const std::string& k) {
    if (k.empty()) {
        return false;
    }
    for (char c : k) {
        if (!bare_key_char(c)) {
            return false;
        }
    }
    return true;
}

// Reads one quoted string starting at s[i] (the opening quote); advances i
// past the closing quote.
std::string read_string(const std::string& s, std::size_t& i, int line) {
    const char quote = s[i++];
    std::string out;
    while (i < s.size() && s[i] != quote) {
        char c = s[i++];
        if (quote == '"' && c == '\\') {
            if (i >= s.size()) {
                fail_line(line, "unterminated escape");
            }
            const char e = s[i++];
            switch (e) {
                case 'n': c = '\n'; break;
                case 't': c = '\t'; break;
                case '"': c = '"'; break;
                case '\\': c = '\\'; break;
                default: fail_line(line, std::string("unknown escape \\") + e);
            }
        }
        out += c;
    }
    if (i >= s.size()) {
        fail_line(line, "unterminated string");
    }
    ++i;
    return out;
}

// Drops a trailing comment that is not inside a string.
std::string strip_comment(const std::string& s) {
    char quote = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (quote) {
            if (c == '\\' && quote == '"') {
                ++i;
            } else if (c == quote) {
                quote = 0;
            }
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '#') {
            return s.substr(0, i);
        }
    }
    return s;
}

ConfigValue parse_value(const std::string& raw, int line) {
    const std::string v = trim(raw);
    if (v.empty()) {
        fail_line(line, "missing value");
    }
    if (v[0] == '"' || v[0] == '\'') {
        std::size_t i = 0;
        auto s = read_string(v, i, line);
        if (!trim(std::string_view(v).substr(i)).empty()) {
            fail_line(line, "text after string");
        }
        return s;
    }
    if (v[0] == '[') {
        std::vector<std::string> items;
        std::size_t i = 1;
        auto skip = [&] {
            while (i < v.size() && std::isspace(static_cast<unsigned char>(v[i]))) {
                ++i;
            }
        };
        skip();
        while (i < v.size() && v[i] != ']') {
            if (v[i] != '"' && v[i] != '\'') {
                fail_line(line, "arrays hold strings only");
            }
            items.push_back(read_string(v, i, line));
            skip();
            if (i < v.size() && v[i] == ',') {
                ++i;
                skip();
            } else if (i < v.size() && v[i] != ']') {
                fail_line(line, "expected ',' or ']'");
            }
        }
        if (i >= v.size() || i + 1 != v.size()) {
            fail_line(line, "unterminated array");
        }
        return items;
    }
    if (v == "true") {
        return true;
    }
    if (v == "false") {
        return false;
    }
    std::string digits;
    for (char c : v) {
        if (c != '_') {
            digits += c;
        }
    }
    const bool integral = digits.find_first_of(".eE") == std::string::npos;
    char* end = nullptr;
    if (integral) {
        const long long n = std::strtoll(digits.c_str(), &end, 10);
        if (end && *end == '\0' && !digits.empty()) {
            return static_cast<std::int64_t>(n);
        }
    } else {
        const double d = std::strtod(digits.c_str(), &end);
        if (end && *end == '\0') {
            return d;
        }
    }
    fail_line(line, "cannot read value '" + v + "'");
}

std::string type_name(const ConfigValue& v) {
    switch (v.index()) {
        case 0: return "boolean";
        case 1: return "integer";
        case 2: return "float";
        case 3: return "string";
        default: return "array";
    }
}

[[noreturn]] void wrong_type(const std::string& key, const ConfigValue& v, const char* wanted) {
    throw Error("bad-config", key + ": expected " + wanted + ", got " + type_name(v));
}

}  // namespace

ConfigDocument ConfigDocument::parse(const std::string& text) {
    ConfigDocument doc;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::set<std::string> sections;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(strip_comment(raw));
        if (s.empty()) {
            continue;
        }
        if (s.front() == '[') {
            if (s.back() != ']') {
                fail_line(line, "unterminated section header");
            }
            section = trim(std::string_view(s).substr(1, s.size() - 2));
            if (!bare_key(section)) {
                fail_line(line, "bad section name '" + section + "'");
            }
            if (!sections.insert(section).second) {
                fail_line(line, "section [" + section + "] appears twice");
            }
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            fail_line(line, "expected key = value");
        }
        const std::string key = trim(std::string_view(s).substr(0, eq));
        if (!bare_key(key)) {
            fail_line(line, "bad key '" + key + "'");
        }
        const std::string full = section.empty() ? key : section + "." + key;
        if (doc.values_.count(full)) {
            fail_line(line, "duplicate key " + full);
        }
        doc.values_[full] = parse_value(s.substr(eq + 1), line);
    }
    return doc;
}

ConfigDocument ConfigDocument::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("io", "cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    auto doc = parse(ss.str());
    doc.base_dir_ = fs::absolute(fs::path(path)).parent_path().string();
    return doc;
}

std::vector<std::string> ConfigDocument::keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_) {
        out.push_back(k);
    }
    return out;
}

std::string ConfigDocument::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        return fallback;
    }
    if (const auto* s = std::get_if<std::string>(&it->second)) {
        return *s;
    }
    wrong_type(key, it->second, "string");
}

std::int64_t ConfigDocument::get_int(const std::string& key, std::int64_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        return fallback;
    }
    if (const auto* n = std::get_if<std::int64_t>(&it->second)) {
        return *n;
    }
    wrong_type(key, it->second, "integer");
}

double ConfigDocument::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        return fallback;
    }
    if (const auto* d = std::get_if<double>(&it->second)) {
        return *d;
    }
    if (const auto* n = std::get_if<std::int64_t>(&it->second)) {
        return static_cast<double>(*n);
    }
    wrong_type(key, it->second, "number");
}

bool ConfigDocument::get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        return fallback;
    }
    if (const auto* b = std::get_if<bool>(&it->second)) {
        return *b;
    }
    wrong_type(key, it->second, "boolean");
}

std::vector<std::string> ConfigDocument::get_list(const std::string& key,
                                                  const std::vector<std::string>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        return fallback;
    }
    if (const auto* l = std::get_if<std::vector<std::string>>(&it->second)) {
        return *l;
    }
    if (const auto* s = std::get_if<std::string>(&it->second)) {
        return {*s};
    }
    wrong_type(key, it->second, "array of strings");
}

std::string ConfigDocument::get_path(const std::string& key) const {
    const auto s = get_string(key);
    if (s.empty()) {
        return s;
    }
    const fs::path p(s);
    if (p.is_absolute() || base_dir_.empty()) {
        return p.string();
    }
    return (fs::path(base_dir_) / p).lexically_normal().string();
}

void ConfigDocument::require_known(const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : values_) {
        if (!allowed.count(k)) {
            throw Error("unknown-key", k);
        }
    }
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"kill_range", "team", "open_field", "corridor"};
    return names;
}

fps::Scenario scenario_by_name(const std::string& name) {
    if (name == "kill_range") {
        return fps::kill_range_scenario();
    }
    if (name == "team") {
        return fps::team_scenario();
    }
    const auto suite = fps::scheduler_suite();
    if (name == "open_field") {
        return suite.at(0);
    }
    if (name == "corridor") {
        return suite.at(1);
    }
    throw Error("bad-config", "unknown scenario '" + name + "'");
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("io", "cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<fps::Scenario> arena_scenarios(const ConfigDocument& doc, const std::vector<std::string>& fallback) {
    std::vector<fps::Scenario> out;
    for (const auto& name : doc.get_list("arena.scenarios", fallback)) {
        out.push_back(scenario_by_name(name));
    }
    if (doc.has("arena.map")) {
        const auto map = std::make_shared<const arena::MapSpec>(arena::MapSpec::load(doc.get_path("arena.map")));
        for (auto& s : out) {
            s.map = map;
        }
    }
    if (doc.has("arena.ticks")) {
        const auto ticks = doc.get_int("arena.ticks", 0);
        if (ticks < 1) {
            throw Error("bad-config", "arena.ticks must be positive");
        }
        for (auto& s : out) {
            s.max_ticks = static_cast<int>(ticks);
        }
    }
    return out;
}

const char* kDefaultScenarioText =
    "A top-down arena shooter on a grid map. Each bot sees enemies in a forward cone when no wall blocks the "
    "line of sight, turns and moves one step per tick, and must aim at a target for a tick before its shots "
    "land. Bots respawn at their team's spawn cells after dying.";

const char* kDefaultTactics =
    "Find enemies quickly, engage the ones in view and keep the time between kills short. Avoid wandering "
    "when an enemy position is known.";

int positive(const ConfigDocument& doc, const std::string& key, int fallback) {
    const auto v = doc.get_int(key, fallback);
    if (v < 1 || v > 1'000'000) {
        throw Error("bad-config", key + " must be a positive integer");
    }
    return static_cast<int>(v);
}

}  // namespace

SearchJob search_job(const ConfigDocument& doc) {
    doc.require_known({"search.n", "search.k", "search.iterations", "search.episodes", "search.seed",
                       "search.objective", "search.jobs", "search.tactics", "search.scenario", "search.seed_tree",
                       "search.weights", "search.output", "generator.mode", "generator.seed", "generator.url",
                       "generator.model", "generator.temperature", "generator.max_tokens", "generator.timeout",
                       "generator.retries", "generator.system_prompt", "arena.scenarios", "arena.ticks",
                       "arena.map"});
    SearchJob job;
    auto& s = job.search;
    s.n = positive(doc, "search.n", s.n);
    s.k = positive(doc, "search.k", s.k);
    s.iterations = positive(doc, "search.iterations", s.iterations);
    s.jobs = positive(doc, "search.jobs", s.jobs);
    s.eval.episodes = positive(doc, "search.episodes", s.eval.episodes);
    s.eval.seed = static_cast<std::uint64_t>(doc.get_int("search.seed", 1));
    s.eval.objective = search::parse_objective(doc.get_string("search.objective", "time_between_kills"));
    s.eval.scenarios = arena_scenarios(doc, {"kill_range"});
    s.scenario_text = doc.get_string("search.scenario", kDefaultScenarioText);
    s.tactics_text = doc.get_string("search.tactics", kDefaultTactics);
    job.weights_dir = doc.get_path("search.weights");
    if (!job.weights_dir.empty()) {
        s.eval.weights = fps::load_task_weights(job.weights_dir);
    }
    job.output_dir = doc.has("search.output") ? doc.get_path("search.output") : "search-out";

    const auto seed_path = doc.get_path("search.seed_tree");
    job.seed_tree = seed_path.empty() ? dsl::parse_or_throw(fps::aggressive_tree_text())
                                      : dsl::parse_or_throw(read_file(seed_path));

    auto& g = job.generator;
    const auto mode = doc.get_string("generator.mode", "mutate");
    if (mode == "mutate") {
        g.mode = genkit::GeneratorMode::Mutate;
    } else if (mode == "remote") {
        g.mode = genkit::GeneratorMode::Remote;
    } else {
        throw Error("bad-config", "generator.mode must be mutate or remote");
    }
    g.mutate.seed = static_cast<std::uint64_t>(doc.get_int("generator.seed", static_cast<std::int64_t>(s.eval.seed)));
    g.remote.url = doc.get_string("generator.url");
    g.remote.model = doc.get_string("generator.model");
    g.remote.temperature = doc.get_double("generator.temperature", g.remote.temperature);
    g.remote.max_tokens = positive(doc, "generator.max_tokens", g.remote.max_tokens);
    g.remote.timeout_seconds = doc.get_double("generator.timeout", g.remote.timeout_seconds);
    g.remote.retries = static_cast<int>(doc.get_int("generator.retries", g.remote.retries));
    g.remote.system_prompt = doc.get_string("generator.system_prompt", g.remote.system_prompt);
    g = genkit::with_environment(g);
    if (g.mode == genkit::GeneratorMode::Mutate) {
        g.check();
    }

    // Generator identity feeds the checkpoint hash; the API key does not.
    std::ostringstream fp;
    fp << "mode=" << genkit::to_string(g.mode) << ";seed_tree=" << dsl::to_canonical_dsl(job.seed_tree);
    if (g.mode == genkit::GeneratorMode::Mutate) {
        fp << ";mutate_seed=" << g.mutate.seed;
    } else {
        fp << ";url=" << g.remote.url << ";model=" << g.remote.model << ";temperature=" << g.remote.temperature
           << ";max_tokens=" << g.remote.max_tokens;
    }
    s.fingerprint = fp.str();
    s.check();
    return job;
}

TaskNodeJob task_node_job(const ConfigDocument& doc) {
    doc.require_known({"train.task", "train.hidden", "train.learning_rate", "train.iterations",
                       "train.episodes_per_iteration", "train.gamma", "train.seed", "train.benchmark_episodes",
                       "train.output"});
    TaskNodeJob job;
    job.task = doc.get_string("train.task", "move_to");
    if (job.task != "move_to" && job.task != "shoot") {
        throw Error("bad-config", "train.task must be move_to or shoot");
    }
    auto& t = job.train;
    t.hidden = positive(doc, "train.hidden", t.hidden);
    t.learning_rate = doc.get_double("train.learning_rate", t.learning_rate);
    t.iterations = static_cast<int>(doc.get_int("train.iterations", t.iterations));
    t.episodes_per_iteration = positive(doc, "train.episodes_per_iteration", t.episodes_per_iteration);
    t.gamma = doc.get_double("train.gamma", t.gamma);
    t.seed = static_cast<std::uint64_t>(doc.get_int("train.seed", 1));
    if (t.iterations < 0 || !(t.learning_rate > 0.0) || t.gamma < 0.0 || t.gamma > 1.0) {
        throw Error("bad-config", "train: iterations >= 0, learning_rate > 0 and gamma in [0, 1] required");
    }
    job.benchmark_episodes = static_cast<int>(doc.get_int("train.benchmark_episodes", job.benchmark_episodes));
    job.output_dir = doc.has("train.output") ? doc.get_path("train.output") : "train-out";
    return job;
}

SchedulerJob scheduler_job(const ConfigDocument& doc) {
    doc.require_known({"scheduler.library", "scheduler.suite", "scheduler.episodes", "scheduler.seed",
                       "scheduler.hidden", "scheduler.iterations", "scheduler.learning_rate",
                       "scheduler.review_period", "scheduler.output", "arena.ticks"});
    SchedulerJob job;
    const auto lib = doc.get_path("scheduler.library");
    job.library = lib.empty() ? scheduler::default_library() : scheduler::PolicyLibrary::load(lib);
    for (const auto& name : doc.get_list("scheduler.suite", {"open_field", "corridor"})) {
        job.suite.push_back(scenario_by_name(name));
    }
    if (doc.has("arena.ticks")) {
        const auto ticks = positive(doc, "arena.ticks", 1);
        for (auto& s : job.suite) {
            s.max_ticks = ticks;
        }
    }
    auto& t = job.train;
    t.episodes = positive(doc, "scheduler.episodes", t.episodes);
    t.seed = static_cast<std::uint64_t>(doc.get_int("scheduler.seed", 1));
    t.hidden = positive(doc, "scheduler.hidden", t.hidden);
    t.iterations = positive(doc, "scheduler.iterations", t.iterations);
    t.learning_rate = doc.get_double("scheduler.learning_rate", t.learning_rate);
    t.switching.review_period = positive(doc, "scheduler.review_period", t.switching.review_period);
    t.check();
    job.output_dir = doc.has("scheduler.output") ? doc.get_path("scheduler.output") : "scheduler-out";
    return job;
}

}  // namespace bta::cli
