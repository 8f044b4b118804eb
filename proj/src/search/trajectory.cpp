#include "bta/search/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bta/core/error.hpp"
#include "bta/core/hash.hpp"
#include "json_support.hpp"

namespace bta::search {

using detail::json;

std::vector<TrajectoryRecord> trajectory_records(const SearchState& state) {
    std::vector<TrajectoryRecord> out;
    for (const auto& c : state.candidates) {
        TrajectoryRecord r;
        r.t = c.iteration;
        r.prompt = c.prompt;
        r.dsl = c.dsl;
        r.reward = c.reward();
        if (c.eval && c.eval->tactical) {
            r.tactical = TacticalReport{};
            r.tactical->scores = c.eval->tactical->scores;
        }
        r.valid = c.valid;
        r.diagnostics = c.diagnostics;
        out.push_back(std::move(r));
    }
    return out;
}

std::string to_jsonl(const std::vector<TrajectoryRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        const json j{{"t", r.t},
                     {"prompt", r.prompt},
                     {"dsl", r.dsl},
                     {"reward", detail::opt_number(r.reward)},
                     {"tactical", r.tactical ? detail::tactical_scores_json(*r.tactical) : json(nullptr)},
                     {"valid", r.valid},
                     {"diagnostics", r.diagnostics}};
        out += j.dump() + "\n";
    }
    return out;
}

std::vector<TrajectoryRecord> from_jsonl(const std::string& text) {
    std::vector<TrajectoryRecord> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        try {
            const auto j = json::parse(line);
            TrajectoryRecord r;
            r.t = j.at("t").get<int>();
            r.prompt = j.at("prompt").get<std::string>();
            r.dsl = j.at("dsl").get<std::string>();
            r.reward = detail::get_opt_number(j.at("reward"));
            if (!j.at("tactical").is_null()) {
                r.tactical = detail::tactical_scores_from_json(j.at("tactical"));
            }
            r.valid = j.at("valid").get<bool>();
            r.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
            out.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw Error("bad-trajectory", "line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void export_trajectories(const std::vector<TrajectoryRecord>& records, const std::string& path) {
    if (records.empty()) {
        throw Error("empty-history", "no trajectory records to export to " + path);
    }
    detail::write_text_file(path, to_jsonl(records));
}

std::vector<TrajectoryRecord> load_trajectories(const std::string& path) {
    return from_jsonl(detail::read_text_file(path));
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

std::string candidates_csv(const SearchState& state) {
    std::ostringstream os;
    os << "id,iteration,parent,valid,reward,fallback,kills,deaths,damage,retained,dsl_hash\n";
    for (const auto& c : state.candidates) {
        const auto& kept = state.retained.at(static_cast<std::size_t>(c.iteration));
        const bool retained = std::find(kept.begin(), kept.end(), c.id) != kept.end();
        os << c.id << ',' << c.iteration << ',' << (c.parent ? std::to_string(*c.parent) : "") << ','
           << (c.valid ? 1 : 0) << ',' << fmt(c.reward()) << ',';
        if (c.eval) {
            os << (c.eval->fallback ? 1 : 0) << ',' << fmt(c.eval->summary.kills) << ','
               << fmt(c.eval->summary.deaths) << ',' << fmt(c.eval->summary.damage);
        } else {
            os << ",,,";
        }
        os << ',' << (retained ? 1 : 0) << ',' << hex64(fnv1a64(c.dsl)) << '\n';
    }
    return os.str();
}

namespace {

struct IterationStats {
    std::optional<double> best;
    std::optional<double> mean;
    int valid = 0;
    int invalid = 0;
};

std::vector<IterationStats> per_iteration(const SearchState& state) {
    std::vector<IterationStats> out(state.retained.size());
    std::vector<double> sums(out.size(), 0.0);
    for (const auto& c : state.candidates) {
        auto& s = out.at(static_cast<std::size_t>(c.iteration));
        if (const auto r = c.reward()) {
            ++s.valid;
            sums[static_cast<std::size_t>(c.iteration)] += *r;
            s.best = s.best ? std::max(*s.best, *r) : *r;
        } else {
            ++s.invalid;
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].valid > 0) {
            out[i].mean = sums[i] / out[i].valid;
        }
    }
    return out;
}

}  // namespace

std::string reward_curve_csv(const SearchState& state) {
    const auto curve = state.best_curve();
    const auto stats = per_iteration(state);
    std::ostringstream os;
    os << "iteration,best_reward,iteration_best,iteration_mean,valid,invalid\n";
    for (std::size_t t = 0; t < curve.size(); ++t) {
        os << t << ',' << fmt(curve[t]) << ',' << fmt(stats[t].best) << ',' << fmt(stats[t].mean) << ','
           << stats[t].valid << ',' << stats[t].invalid << '\n';
    }
    return os.str();
}

std::string reward_plot_svg(const SearchState& state) {
    constexpr double kW = 640, kH = 400, kLeft = 60, kRight = 20, kTop = 20, kBottom = 50;
    const auto curve = state.best_curve();
    double lo = 0.0, hi = 1.0;
    bool any = false;
    for (const auto& c : state.candidates) {
        if (const auto r = c.reward()) {
            lo = any ? std::min(lo, *r) : std::min(0.0, *r);
            hi = any ? std::max(hi, *r) : std::max(1.0, *r);
            any = true;
        }
    }
    if (hi - lo < 1e-9) {
        hi = lo + 1.0;
    }
    const double iters = std::max<double>(1.0, static_cast<double>(curve.size()) - 1.0);
    auto x = [&](double t) { return kLeft + (kW - kLeft - kRight) * t / iters; };
    auto y = [&](double r) { return kH - kBottom - (kH - kTop - kBottom) * (r - lo) / (hi - lo); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight << "\" y2=\""
       << kH - kBottom << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kH - kBottom
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\" font-size=\"12\">iteration</text>\n";
    os << "<text x=\"14\" y=\"" << kH / 2 << "\" font-size=\"12\" transform=\"rotate(-90 14 " << kH / 2
       << ")\" text-anchor=\"middle\">reward</text>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << y(hi) + 4 << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(hi)
       << "</text>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << y(lo) + 4 << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(lo)
       << "</text>\n";
    for (std::size_t t = 0; t < curve.size(); ++t) {
        os << "<text x=\"" << x(static_cast<double>(t)) << "\" y=\"" << kH - kBottom + 14
           << "\" text-anchor=\"middle\" font-size=\"10\">" << t << "</text>\n";
    }
    for (const auto& c : state.candidates) {
        if (const auto r = c.reward()) {
            os << "<circle cx=\"" << x(c.iteration) << "\" cy=\"" << y(*r)
               << "\" r=\"3\" fill=\"steelblue\" fill-opacity=\"0.3\"/>\n";
        }
    }
    std::string points;
    for (std::size_t t = 0; t < curve.size(); ++t) {
        if (curve[t]) {
            points += fmt(x(static_cast<double>(t))) + "," + fmt(y(*curve[t])) + " ";
        }
    }
    if (!points.empty()) {
        os << "<polyline points=\"" << points << "\" fill=\"none\" stroke=\"navy\" stroke-width=\"2\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace bta::search
