#include "bta/genkit/generator.hpp"

#include <algorithm>
#include <cstdlib>

#include "bta/core/error.hpp"
#include "bta/core/hash.hpp"
#include "bta/dsl/printer.hpp"
#include "bta/genkit/extract.hpp"

namespace bta::genkit {

std::string_view to_string(GeneratorMode mode) { return mode == GeneratorMode::Remote ? "remote" : "mutate"; }

void GeneratorConfig::check() const {
    if (mode == GeneratorMode::Remote) {
        if (remote.url.empty()) {
            throw Error("bad-config", "remote generator needs a URL (set GENERATOR_URL)");
        }
        if (!(remote.temperature >= 0.0 && remote.temperature <= 2.0)) {
            throw Error("bad-config", "temperature must be within [0, 2]");
        }
        if (remote.max_tokens < 1 || remote.retries < 0 || !(remote.timeout_seconds > 0.0)) {
            throw Error("bad-config", "max_tokens, retries and timeout must be positive");
        }
    } else {
        for (int i = 0; i < kMutationOpCount; ++i) {
            if (mutate.weights.weight(static_cast<MutationOp>(i)) < 0.0) {
                throw Error("bad-config", "mutation weights must be non-negative");
            }
        }
    }
}

GeneratorConfig with_environment(GeneratorConfig config) {
    if (config.remote.url.empty()) {
        if (const char* url = std::getenv("GENERATOR_URL")) {
            config.remote.url = url;
        }
    }
    if (config.remote.api_key.empty()) {
        if (const char* key = std::getenv("GENERATOR_KEY")) {
            config.remote.api_key = key;
        }
    }
    return config;
}

bool GenerationRecord::flagged(std::string_view flag) const {
    return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

void annotate(GenerationRecord& record) {
    try {
        auto ex = extract_tagged(record.completion);
        record.reflection = std::move(ex.reflection);
        record.think = std::move(ex.think);
        record.dsl = std::move(ex.dsl);
    } catch (const Error& e) {
        if (e.code() != "malformed-tags") {
            throw;
        }
        record.flags.emplace_back("malformed-tags");
        record.dsl = extract_dsl(record.completion);
    }
    if (!record.dsl) {
        record.flags.emplace_back("no-dsl");
    }
}

MutateGenerator::MutateGenerator(MutateConfig config, dsl::NodeCatalog catalog, dsl::BtNode seed_tree)
    : config_(config), catalog_(std::move(catalog)), seed_tree_(std::move(seed_tree)) {}

std::vector<GenerationRecord> MutateGenerator::generate(const GenerationRequest& request, int n) {
    if (n < 1) {
        throw Error("bad-request", "n must be at least 1");
    }
    const dsl::BtNode& base = request.base ? *request.base : seed_tree_;
    const std::string base_text = dsl::to_canonical_dsl(base);
    Rng rng(derive_seed(derive_seed(config_.seed, request.salt), fnv1a64(base_text)));
    auto variants = mutate_distinct(base, catalog_, n, rng, config_.weights);
    // Small neighbourhoods: pad with further (possibly repeated) edits.
    while (!variants.empty() && static_cast<int>(variants.size()) < n) {
        variants.push_back(mutate(base, catalog_, rng, config_.weights));
    }
    std::vector<GenerationRecord> out;
    for (const auto& v : variants) {
        GenerationRecord r;
        r.prompt = request.prompt;
        r.mode = GeneratorMode::Mutate;
        r.completion = "```\n" + dsl::to_canonical_dsl(v) + "```\n";
        annotate(r);
        out.push_back(std::move(r));
    }
    if (out.empty()) {
        throw Error("generator-unavailable", "the base tree admits no valid edit");
    }
    return out;
}

std::unique_ptr<Generator> make_generator(const GeneratorConfig& config, const dsl::NodeCatalog& catalog,
                                          const dsl::BtNode& seed_tree) {
    config.check();
    if (config.mode == GeneratorMode::Remote) {
        return std::make_unique<RemoteGenerator>(config.remote);
    }
    return std::make_unique<MutateGenerator>(config.mutate, catalog, seed_tree);
}

}  // namespace bta::genkit
