#include "bta/search/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace bta::search {
namespace {

struct Field {
    const char* name;
    std::optional<double> value;
    std::optional<double> base;
    bool higher_is_better;
};

std::string number(double v) {
    if (std::fabs(v - std::round(v)) < 1e-9) {
        std::ostringstream os;
        os << static_cast<long long>(std::llround(v));
        return os.str();
    }
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << v;
    return os.str();
}

std::vector<Field> fields(const MetricsSummary& m, const std::optional<MetricsSummary>& b) {
    auto base = [&](auto member) -> std::optional<double> {
        if (!b) {
            return std::nullopt;
        }
        return (*b).*member;
    };
    std::vector<Field> out{
        {"kills", m.kills, base(&MetricsSummary::kills), true},
        {"deaths", m.deaths, base(&MetricsSummary::deaths), false},
        {"shots", m.shots, base(&MetricsSummary::shots), true},
        {"hits", m.hits, base(&MetricsSummary::hits), true},
        {"damage", m.damage, base(&MetricsSummary::damage), true},
        {"objective_ticks", m.objective_ticks, base(&MetricsSummary::objective_ticks), true},
        // Lower cadence is better.
        {"time_between_kills", m.time_between_kills, b ? b->time_between_kills : std::nullopt, false},
    };
    return out;
}

// Signed improvement, negative for regressions; 0 without a comparison.
double gain(const Field& f) {
    if (!f.value || !f.base) {
        return 0.0;
    }
    const double d = *f.value - *f.base;
    return f.higher_is_better ? d : -d;
}

std::string describe(const Field& f, bool with_baseline) {
    std::string s = f.name;
    if (!f.value) {
        s += ": not observed (fewer than 2 kills)";
        if (with_baseline && f.base) {
            s += ", was " + number(*f.base);
        }
        return s;
    }
    if (!with_baseline) {
        return s + ": " + number(*f.value);
    }
    if (!f.base) {
        return s + ": " + number(*f.value) + " (baseline not observed)";
    }
    const double g = gain(f);
    if (std::fabs(*f.value - *f.base) < 1e-9) {
        return s + ": no change (" + number(*f.value) + ")";
    }
    return s + (g > 0 ? " improved from " : " regressed from ") + number(*f.base) + " to " + number(*f.value);
}

}  // namespace

std::string metrics_to_text(const MetricsSummary& metrics, const std::optional<MetricsSummary>& baseline) {
    auto list = fields(metrics, baseline);
    if (baseline) {
        std::stable_sort(list.begin(), list.end(), [](const Field& a, const Field& b) { return gain(a) < gain(b); });
    }
    std::ostringstream os;
    os << "Mean over " << metrics.episodes << " episode" << (metrics.episodes == 1 ? "" : "s") << ":\n";
    for (const auto& f : list) {
        os << "- " << describe(f, baseline.has_value()) << '\n';
    }
    return os.str();
}

std::string tactical_to_text(const TacticalReport& report) {
    std::ostringstream os;
    for (int i = 0; i < kDimensionCount; ++i) {
        const auto d = static_cast<Dimension>(i);
        os << "- " << to_string(d) << ": " << number(report.score(d)) << "/10";
        const auto& note = report.notes[static_cast<std::size_t>(i)];
        if (!note.empty()) {
            os << " (" << note << ')';
        }
        os << '\n';
    }
    return os.str();
}

std::string evaluation_feedback(const Evaluation& eval, const std::optional<MetricsSummary>& baseline) {
    std::ostringstream os;
    os << "Reward: " << number(eval.reward);
    if (eval.fallback) {
        os << " (objective undefined on every episode; ranked by kills, then damage)";
    }
    os << "\n\n" << metrics_to_text(eval.summary, baseline);
    if (eval.tactical) {
        os << "\nTactical Analysis:\n" << tactical_to_text(*eval.tactical);
    }
    return os.str();
}

}  // namespace bta::search
