#include "bta/search/tactical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "bta/core/error.hpp"

namespace bta::search {

namespace {

constexpr double kEps = 1e-9;

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

double clamp10(double v) { return std::clamp(v, 0.0, 10.0); }

Vec2 enemy_spawn_centroid(const arena::MapSpec& map, int team) {
    const auto& spawns = map.spawns(1 - team);
    Vec2 c{0.0, 0.0};
    for (const auto& s : spawns) {
        const Vec2 p = arena::cell_center(s);
        c.x += p.x;
        c.y += p.y;
    }
    c.x /= static_cast<double>(spawns.size());
    c.y /= static_cast<double>(spawns.size());
    return c;
}

double map_control(const arena::ReplayTrace& trace, int team, std::string& note) {
    const auto& map = *trace.map;
    std::vector<Vec2> free_cells;
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            if (!map.blocked({x, y})) {
                free_cells.push_back(arena::cell_center({x, y}));
            }
        }
    }
    double total = 0.0;
    int frames = 0;
    for (std::size_t f = 0; f < trace.frames.size(); f += kMapControlStride) {
        const auto& agents = trace.frames[f].agents;
        double share = 0.0;
        for (const Vec2& c : free_cells) {
            double own = std::numeric_limits<double>::infinity();
            double other = std::numeric_limits<double>::infinity();
            for (const auto& a : agents) {
                if (!a.alive) {
                    continue;
                }
                const double d = distance(a.position, c);
                (a.team == team ? own : other) = std::min(a.team == team ? own : other, d);
            }
            if (std::isinf(own) && std::isinf(other)) {
                share += 0.5;
            } else if (std::abs(own - other) < kEps) {
                share += 0.5;
            } else if (own < other) {
                share += 1.0;
            }
        }
        total += share / static_cast<double>(free_cells.size());
        ++frames;
    }
    const double frac = total / frames;
    note = "held " + fixed(100.0 * frac, 1) + "% of the floor on average over " + std::to_string(frames) +
           " sampled frames";
    return clamp10(10.0 * frac);
}

double adaptability(const arena::ReplayTrace& trace, int team, std::string& note) {
    std::size_t first_hit = trace.frames.size();
    for (std::size_t f = 0; f < trace.frames.size() && first_hit == trace.frames.size(); ++f) {
        for (const auto& e : trace.frames[f].events) {
            if (e.kind != arena::EventKind::Hit) {
                continue;
            }
            const auto team_of = [&](int id) { return trace.frames[f].agents[static_cast<std::size_t>(id)].team; };
            if (team_of(e.actor) == team || team_of(e.target) == team) {
                first_hit = f;
                break;
            }
        }
    }
    std::array<double, 4> before{};
    std::array<double, 4> after{};
    for (std::size_t f = 0; f < trace.frames.size(); ++f) {
        const auto& frame = trace.frames[f];
        for (std::size_t i = 0; i < frame.actions.size(); ++i) {
            if (frame.agents[i].team != team) {
                continue;
            }
            // A frame holds the post-step state; the agent acted if it was
            // alive before the step, which its action record reflects.
            auto& hist = f <= first_hit ? before : after;
            hist[static_cast<std::size_t>(frame.actions[i].verb)] += 1.0;
        }
    }
    const double nb = before[0] + before[1] + before[2] + before[3];
    const double na = after[0] + after[1] + after[2] + after[3];
    if (first_hit == trace.frames.size() || nb == 0.0 || na == 0.0) {
        note = "no exchange of fire to adapt to";
        return 0.0;
    }
    double tv = 0.0;
    for (std::size_t v = 0; v < 4; ++v) {
        tv += std::abs(before[v] / nb - after[v] / na);
    }
    tv *= 0.5;
    note = "verb mix shifted by " + fixed(tv) + " (total variation) after first contact at tick " +
           std::to_string(trace.frames[first_hit].tick);
    return clamp10(10.0 * tv);
}

double coordination(const arena::ReplayTrace& trace, int team, std::string& note) {
    if (trace.team_sizes[static_cast<std::size_t>(team)] < 2) {
        note = "single-agent team";
        return 0.0;
    }
    double spread_sum = 0.0;
    int samples = 0;
    for (const auto& frame : trace.frames) {
        bool engaging = false;
        for (std::size_t i = 0; i < frame.actions.size(); ++i) {
            if (frame.agents[i].team == team && frame.actions[i].verb == arena::Verb::Fire) {
                engaging = true;
            }
        }
        if (!engaging) {
            continue;
        }
        double sum = 0.0;
        int pairs = 0;
        for (std::size_t i = 0; i < frame.agents.size(); ++i) {
            for (std::size_t j = i + 1; j < frame.agents.size(); ++j) {
                const auto& a = frame.agents[i];
                const auto& b = frame.agents[j];
                if (a.team == team && b.team == team && a.alive && b.alive) {
                    sum += distance(a.position, b.position);
                    ++pairs;
                }
            }
        }
        if (pairs > 0) {
            spread_sum += sum / pairs;
            ++samples;
        }
    }
    if (samples == 0) {
        note = "never engaged with two or more members alive";
        return 0.0;
    }
    const double spread = spread_sum / samples;
    note = "mean spread " + fixed(spread) + " cells over " + std::to_string(samples) + " engaging ticks";
    return clamp10(10.0 / (1.0 + spread / 4.0));
}

double aggression(const arena::ReplayTrace& trace, int team, std::string& note) {
    const Vec2 target = enemy_spawn_centroid(*trace.map, team);
    double advance = 0.0;
    double shots = 0.0;
    double agent_ticks = 0.0;
    const auto* prev = &trace.initial;
    for (const auto& frame : trace.frames) {
        for (std::size_t i = 0; i < frame.agents.size(); ++i) {
            const auto& before = (*prev)[i];
            const auto& after = frame.agents[i];
            if (after.team != team || !before.alive) {
                continue;
            }
            agent_ticks += 1.0;
            if (frame.actions[i].verb == arena::Verb::Fire) {
                shots += 1.0;
            }
            if (after.alive) {
                const double d0 = distance(before.position, target);
                const double d1 = distance(after.position, target);
                if (d1 < d0 - kEps) {
                    advance += 1.0;
                } else if (d1 > d0 + kEps) {
                    advance -= 1.0;
                }
            }
        }
        prev = &frame.agents;
    }
    if (agent_ticks == 0.0) {
        note = "no living agent-ticks";
        return 0.0;
    }
    const double adv_rate = std::max(0.0, advance / agent_ticks);
    const double fire_rate = shots / agent_ticks;
    note = "net advance rate " + fixed(adv_rate) + ", fire rate " + fixed(fire_rate) + " per agent-tick";
    return clamp10(10.0 * 0.5 * (adv_rate + fire_rate));
}

double goal(const arena::ReplayTrace& trace, int team, std::string& note) {
    const auto& map = *trace.map;
    int kills = 0;
    int deaths = 0;
    int held = 0;
    for (const auto& frame : trace.frames) {
        for (const auto& e : frame.events) {
            if (e.kind != arena::EventKind::Kill) {
                continue;
            }
            if (frame.agents[static_cast<std::size_t>(e.target)].team == team) {
                ++deaths;
            } else if (e.actor >= 0 && frame.agents[static_cast<std::size_t>(e.actor)].team == team) {
                ++kills;
            }
        }
        // Same rule as the metrics: held when uncontested.
        bool own = false;
        bool other = false;
        for (const auto& a : frame.agents) {
            if (a.alive && map.is_objective(arena::cell_of(a.position))) {
                (a.team == team ? own : other) = true;
            }
        }
        held += own && !other ? 1 : 0;
    }
    if (!map.objectives().empty()) {
        const int ticks = static_cast<int>(trace.frames.size());
        note = "held the objective for " + std::to_string(held) + " of " + std::to_string(ticks) + " ticks";
        return clamp10(10.0 * held / ticks);
    }
    if (kills + deaths == 0) {
        note = "no kills and no deaths";
        return 0.0;
    }
    note = std::to_string(kills) + " kills against " + std::to_string(deaths) + " deaths";
    return clamp10(10.0 * kills / (kills + deaths));
}

}  // namespace

std::string_view to_string(Dimension d) {
    switch (d) {
        case Dimension::MapControl: return "map_control";
        case Dimension::Adaptability: return "adaptability";
        case Dimension::TeamCoordination: return "team_coordination";
        case Dimension::TeamAggression: return "team_aggression";
        case Dimension::GoalAchievement: return "goal_achievement";
    }
    return "?";
}

double TacticalReport::mean() const {
    double s = 0.0;
    for (double v : scores) {
        s += v;
    }
    return s / kDimensionCount;
}

TacticalReport tactical_analysis(const arena::ReplayTrace& trace, int team) {
    if (trace.frames.empty()) {
        throw Error("empty-trace", "tactical analysis needs at least one frame");
    }
    TacticalReport r;
    r.scores[0] = map_control(trace, team, r.notes[0]);
    r.scores[1] = adaptability(trace, team, r.notes[1]);
    r.scores[2] = coordination(trace, team, r.notes[2]);
    r.scores[3] = aggression(trace, team, r.notes[3]);
    r.scores[4] = goal(trace, team, r.notes[4]);
    return r;
}

int dimensions_improved(const TacticalReport& before, const TacticalReport& after) {
    int n = 0;
    for (std::size_t i = 0; i < kDimensionCount; ++i) {
        if (after.scores[i] > before.scores[i] || (before.scores[i] >= 10.0 && after.scores[i] >= 10.0)) {
            ++n;
        }
    }
    return n;
}

TacticalReport average(std::span<const TacticalReport> reports) {
    TacticalReport out;
    if (reports.empty()) {
        return out;
    }
    for (const auto& r : reports) {
        for (std::size_t i = 0; i < kDimensionCount; ++i) {
            out.scores[i] += r.scores[i];
        }
    }
    for (std::size_t i = 0; i < kDimensionCount; ++i) {
        out.scores[i] /= static_cast<double>(reports.size());
        out.notes[i] = "mean over " + std::to_string(reports.size()) + " episodes: " + fixed(out.scores[i]) + "/10";
    }
    return out;
}

}  // namespace bta::search
