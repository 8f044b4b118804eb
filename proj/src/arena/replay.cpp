#include "bta/arena/replay.hpp"

#include <fstream>
#include <iterator>

#include "bta/core/bytes.hpp"
#include "bta/core/error.hpp"
#include "bta/core/hash.hpp"

namespace bta::arena {

bool operator==(const ReplayTrace& a, const ReplayTrace& b) {
    const bool same_map = (a.map == nullptr && b.map == nullptr) ||
                          (a.map != nullptr && b.map != nullptr && a.map->hash() == b.map->hash());
    return same_map && a.seed == b.seed && a.team_sizes == b.team_sizes && a.rules == b.rules &&
           a.initial == b.initial && a.frames == b.frames;
}

std::vector<AgentSnapshot> snapshot(const World& world) {
    std::vector<AgentSnapshot> out;
    out.reserve(world.agents.size());
    for (const auto& a : world.agents) {
        out.push_back({a.id, a.team, a.position, a.facing, a.health, a.ammo, a.alive, a.aim_target});
    }
    return out;
}

namespace {

constexpr char kMagic[4] = {'B', 'T', 'R', 'P'};

void put_agents(ByteWriter& w, const std::vector<AgentSnapshot>& agents) {
    w.put(static_cast<std::uint32_t>(agents.size()));
    for (const auto& a : agents) {
        w.put(static_cast<std::int32_t>(a.id));
        w.put(static_cast<std::uint8_t>(a.team));
        w.put(a.position.x);
        w.put(a.position.y);
        w.put(a.facing.x);
        w.put(a.facing.y);
        w.put(static_cast<std::int32_t>(a.health));
        w.put(static_cast<std::int32_t>(a.ammo));
        w.put(static_cast<std::uint8_t>(a.alive));
        w.put(static_cast<std::int32_t>(a.aim_target));
    }
}

std::vector<AgentSnapshot> get_agents(ByteReader& r) {
    std::vector<AgentSnapshot> agents(r.get<std::uint32_t>());
    for (auto& a : agents) {
        a.id = r.get<std::int32_t>();
        a.team = r.get<std::uint8_t>();
        a.position.x = r.get<double>();
        a.position.y = r.get<double>();
        a.facing.x = r.get<double>();
        a.facing.y = r.get<double>();
        a.health = r.get<std::int32_t>();
        a.ammo = r.get<std::int32_t>();
        a.alive = r.get<std::uint8_t>() != 0;
        a.aim_target = r.get<std::int32_t>();
    }
    return agents;
}

void put_rules(ByteWriter& w, const CombatRules& rules) {
    w.put(static_cast<std::int32_t>(rules.max_health));
    w.put(static_cast<std::int32_t>(rules.damage));
    w.put(rules.range);
    w.put(static_cast<std::int32_t>(rules.respawn_ticks));
    w.put(static_cast<std::int32_t>(rules.start_ammo));
    w.put(static_cast<std::uint8_t>(rules.respawn));
    w.put(static_cast<std::uint8_t>(rules.aim_noise));
    w.put(rules.hearing_range);
    w.put(static_cast<std::int32_t>(rules.low_health));
    w.put(rules.close_range);
    w.put(rules.teammate_radius);
}

CombatRules get_rules(ByteReader& r) {
    CombatRules rules;
    rules.max_health = r.get<std::int32_t>();
    rules.damage = r.get<std::int32_t>();
    rules.range = r.get<double>();
    rules.respawn_ticks = r.get<std::int32_t>();
    rules.start_ammo = r.get<std::int32_t>();
    rules.respawn = r.get<std::uint8_t>() != 0;
    rules.aim_noise = r.get<std::uint8_t>() != 0;
    rules.hearing_range = r.get<double>();
    rules.low_health = r.get<std::int32_t>();
    rules.close_range = r.get<double>();
    rules.teammate_radius = r.get<double>();
    return rules;
}

std::vector<std::uint8_t> encode_frame(const TraceFrame& f) {
    ByteWriter w;
    w.put(static_cast<std::int32_t>(f.tick));
    put_agents(w, f.agents);
    w.put(static_cast<std::uint32_t>(f.actions.size()));
    for (const auto& a : f.actions) {
        w.put(static_cast<std::uint8_t>(a.verb));
        w.put(static_cast<std::int32_t>(a.direction));
        w.put(static_cast<std::int32_t>(a.target));
        w.put(static_cast<std::int32_t>(a.agent));
    }
    w.put(static_cast<std::uint32_t>(f.events.size()));
    for (const auto& e : f.events) {
        w.put(static_cast<std::int32_t>(e.tick));
        w.put(static_cast<std::uint8_t>(e.kind));
        w.put(static_cast<std::int32_t>(e.actor));
        w.put(static_cast<std::int32_t>(e.target));
        w.put_string(e.message);
    }
    return w.take();
}

TraceFrame decode_frame(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    TraceFrame f;
    f.tick = r.get<std::int32_t>();
    f.agents = get_agents(r);
    f.actions.resize(r.get<std::uint32_t>());
    for (auto& a : f.actions) {
        const auto verb = r.get<std::uint8_t>();
        if (verb > static_cast<std::uint8_t>(Verb::Fire)) {
            throw Error("bad-replay", "unknown verb " + std::to_string(verb));
        }
        a.verb = static_cast<Verb>(verb);
        a.direction = r.get<std::int32_t>();
        a.target = r.get<std::int32_t>();
        a.agent = r.get<std::int32_t>();
    }
    f.events.resize(r.get<std::uint32_t>());
    for (auto& e : f.events) {
        e.tick = r.get<std::int32_t>();
        const auto kind = r.get<std::uint8_t>();
        if (kind > static_cast<std::uint8_t>(EventKind::Warning)) {
            throw Error("bad-replay", "unknown event kind " + std::to_string(kind));
        }
        e.kind = static_cast<EventKind>(kind);
        e.actor = r.get<std::int32_t>();
        e.target = r.get<std::int32_t>();
        e.message = r.get_string();
    }
    if (!r.done()) {
        throw Error("bad-replay", "trailing bytes in frame record");
    }
    return f;
}

}  // namespace

std::vector<std::uint8_t> encode_replay(const ReplayTrace& trace) {
    if (!trace.map) {
        throw Error("bad-replay", "trace has no map");
    }
    ByteWriter w;
    for (char c : kMagic) {
        w.put(static_cast<std::uint8_t>(c));
    }
    w.put(kReplayVersion);
    w.put(trace.map->hash());
    w.put(trace.seed);
    w.put_string(trace.map->to_text());
    w.put(static_cast<std::int32_t>(trace.team_sizes[0]));
    w.put(static_cast<std::int32_t>(trace.team_sizes[1]));
    put_rules(w, trace.rules);
    put_agents(w, trace.initial);
    w.put(static_cast<std::uint32_t>(trace.frames.size()));
    for (const auto& f : trace.frames) {
        const auto rec = encode_frame(f);
        w.put(static_cast<std::uint32_t>(rec.size()));
        w.put_bytes(rec);
    }
    return w.take();
}

ReplayTrace decode_replay(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    for (char c : kMagic) {
        if (r.remaining() == 0 || r.get<std::uint8_t>() != static_cast<std::uint8_t>(c)) {
            throw Error("bad-magic", "not a replay file");
        }
    }
    const auto version = r.get<std::uint16_t>();
    if (version != kReplayVersion) {
        throw Error("bad-version", "unsupported replay version " + std::to_string(version));
    }
    ReplayTrace trace;
    const auto map_hash = r.get<std::uint64_t>();
    trace.seed = r.get<std::uint64_t>();
    trace.map = std::make_shared<const MapSpec>(MapSpec::parse(r.get_string()));
    if (trace.map->hash() != map_hash) {
        throw Error("map-mismatch", "embedded map does not match header hash");
    }
    trace.team_sizes[0] = r.get<std::int32_t>();
    trace.team_sizes[1] = r.get<std::int32_t>();
    trace.rules = get_rules(r);
    trace.initial = get_agents(r);
    const auto count = r.get<std::uint32_t>();
    for (std::uint32_t i = 0; i < count; ++i) {
        const auto len = r.get<std::uint32_t>();
        trace.frames.push_back(decode_frame(r.get_bytes(len)));
    }
    if (!r.done()) {
        throw Error("bad-replay", "trailing bytes after last frame");
    }
    return trace;
}

void save_replay(const ReplayTrace& trace, const std::string& path) {
    const auto bytes = encode_replay(trace);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("io", "cannot write " + path);
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

ReplayTrace load_replay(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("io", "cannot read " + path);
    }
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_replay(bytes);
}

std::uint64_t trace_hash(const ReplayTrace& trace) { return fnv1a64(std::span<const std::uint8_t>(encode_replay(trace))); }

ReplayTrace resimulate(const ReplayTrace& trace) {
    Rng rng(trace.seed);
    World world = make_world(trace.map, trace.team_sizes, trace.rules, rng);
    ReplayTrace out;
    out.map = trace.map;
    out.seed = trace.seed;
    out.team_sizes = trace.team_sizes;
    out.rules = trace.rules;
    out.initial = snapshot(world);
    for (const auto& f : trace.frames) {
        const int tick = world.tick;
        auto events = step(world, f.actions, rng);
        out.frames.push_back({tick, snapshot(world), f.actions, std::move(events)});
    }
    return out;
}

}  // namespace bta::arena
