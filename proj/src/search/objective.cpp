#include "bta/search/objective.hpp"

#include <algorithm>
#include <sstream>

#include "bta/core/error.hpp"

namespace bta::search {

const std::vector<std::string>& objective_terms() {
    static const std::vector<std::string> terms = {
        "time_between_kills", "kills",          "deaths",       "damage",          "hits",
        "objective_ticks",    "kill_ratio",     "tactical",     "map_control",     "adaptability",
        "team_coordination",  "team_aggression", "goal_achievement"};
    return terms;
}

std::string Objective::name() const {
    if (terms.size() == 1 && terms[0].second == 1.0) {
        return terms[0].first;
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        os << (i ? "," : "") << terms[i].first << ":" << terms[i].second;
    }
    return os.str();
}

bool Objective::needs_tactical() const {
    for (const auto& [term, w] : terms) {
        if (term == "tactical" || term == "map_control" || term == "adaptability" || term == "team_coordination" ||
            term == "team_aggression" || term == "goal_achievement") {
            return true;
        }
    }
    return false;
}

Objective parse_objective(const std::string& text) {
    Objective obj;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        std::string term = item.substr(0, colon);
        double weight = 1.0;
        if (colon != std::string::npos) {
            try {
                std::size_t used = 0;
                weight = std::stod(item.substr(colon + 1), &used);
                if (used != item.size() - colon - 1) {
                    throw std::invalid_argument("trailing");
                }
            } catch (const std::exception&) {
                throw Error("bad-objective", "bad weight in '" + item + "'");
            }
        }
        const auto& known = objective_terms();
        if (std::find(known.begin(), known.end(), term) == known.end()) {
            throw Error("bad-objective", "unknown objective term '" + term + "'");
        }
        obj.terms.emplace_back(std::move(term), weight);
    }
    if (obj.terms.empty()) {
        throw Error("bad-objective", "empty objective");
    }
    return obj;
}

std::optional<double> objective_value(const Objective& objective, const arena::GameMetrics& metrics, int team,
                                      const arena::CombatRules& rules, const TacticalReport* tactical) {
    const auto& t = metrics.team(team);
    double total = 0.0;
    for (const auto& [term, w] : objective.terms) {
        double v = 0.0;
        if (term == "time_between_kills") {
            const auto s = arena::time_between_kills_score(t, rules);
            if (!s) {
                return std::nullopt;
            }
            v = *s;
        } else if (term == "kills") {
            v = t.kills;
        } else if (term == "deaths") {
            v = -t.deaths;
        } else if (term == "damage") {
            v = t.damage_dealt;
        } else if (term == "hits") {
            v = t.hits;
        } else if (term == "objective_ticks") {
            v = t.objective_ticks;
        } else if (term == "kill_ratio") {
            v = t.kills + t.deaths == 0 ? 0.0 : static_cast<double>(t.kills) / (t.kills + t.deaths);
        } else {
            if (tactical == nullptr) {
                throw Error("bad-objective", "term '" + term + "' needs a tactical report");
            }
            if (term == "tactical") {
                v = tactical->mean() / 10.0;
            } else {
                for (int d = 0; d < kDimensionCount; ++d) {
                    if (to_string(static_cast<Dimension>(d)) == term) {
                        v = tactical->scores[static_cast<std::size_t>(d)] / 10.0;
                    }
                }
            }
        }
        total += w * v;
    }
    return total;
}

double fallback_reward(double mean_kills, double mean_damage) {
    return -1.0 / (1.0 + mean_kills + mean_damage / 1000.0);
}

}  // namespace bta::search
