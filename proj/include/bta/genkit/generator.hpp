#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bta/dsl/ast.hpp"
#include "bta/dsl/catalog.hpp"
#include "bta/genkit/mutate.hpp"

namespace bta::genkit {

enum class GeneratorMode { Remote, Mutate };

std::string_view to_string(GeneratorMode mode);

struct RemoteConfig {
    std::string url;  // full endpoint, e.g. http://localhost:8000/v1/chat/completions
    std::string model;
    std::string api_key;  // sent as a bearer token when non-empty
    double temperature = 0.7;
    int max_tokens = 1024;
    double timeout_seconds = 60.0;
    int retries = 2;
    std::string system_prompt = "You design behavior trees for game bots.";
};

struct MutateConfig {
    std::uint64_t seed = 0;
    MutationWeights weights;
};

struct GeneratorConfig {
    GeneratorMode mode = GeneratorMode::Mutate;
    RemoteConfig remote;
    MutateConfig mutate;

    // Throws bta::Error("bad-config").
    void check() const;
};

// Fills remote.url / remote.api_key from GENERATOR_URL / GENERATOR_KEY when
// they are empty in `config`.
GeneratorConfig with_environment(GeneratorConfig config);

struct GenerationRecord {
    std::string prompt;
    std::string completion;
    std::optional<std::string> dsl;
    std::string reflection;
    std::string think;
    double latency_ms = 0.0;
    GeneratorMode mode = GeneratorMode::Mutate;
    std::vector<std::string> flags;  // "no-dsl", "malformed-tags"

    bool flagged(std::string_view flag) const;
};

struct GenerationRequest {
    std::string prompt;
    // Tree the mutate generator edits; the generator's seed tree when unset.
    std::optional<dsl::BtNode> base;
    // Distinguishes repeated requests with identical inputs (e.g. the search
    // iteration), so deterministic generators do not repeat themselves.
    std::uint64_t salt = 0;
};

class Generator {
public:
    virtual ~Generator() = default;
    // n >= 1 records in request order. Throws bta::Error("bad-request") for
    // n < 1 and ("generator-unavailable") when the backend cannot answer.
    virtual std::vector<GenerationRecord> generate(const GenerationRequest& request, int n) = 0;
    virtual GeneratorMode mode() const = 0;
};

// Fills dsl/reflection/think/flags of a record from its completion.
void annotate(GenerationRecord& record);

class MutateGenerator : public Generator {
public:
    MutateGenerator(MutateConfig config, dsl::NodeCatalog catalog, dsl::BtNode seed_tree);

    std::vector<GenerationRecord> generate(const GenerationRequest& request, int n) override;
    GeneratorMode mode() const override { return GeneratorMode::Mutate; }

private:
    MutateConfig config_;
    dsl::NodeCatalog catalog_;
    dsl::BtNode seed_tree_;
};

class RemoteGenerator : public Generator {
public:
    explicit RemoteGenerator(RemoteConfig config);

    std::vector<GenerationRecord> generate(const GenerationRequest& request, int n) override;
    GeneratorMode mode() const override { return GeneratorMode::Remote; }

    // The JSON body sent for one completion.
    std::string request_body(const std::string& prompt) const;

private:
    std::string complete(const std::string& prompt) const;

    RemoteConfig config_;
};

std::unique_ptr<Generator> make_generator(const GeneratorConfig& config, const dsl::NodeCatalog& catalog,
                                          const dsl::BtNode& seed_tree);

}  // namespace bta::genkit
