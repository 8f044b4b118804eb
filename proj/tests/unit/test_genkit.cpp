#include <gtest/gtest.h>
#include <httplib.h>

#include <functional>
#include <thread>

#include "bta/core/error.hpp"
#include "bta/dsl/dsl.hpp"
#include "bta/fps/catalog.hpp"
#include "bta/genkit/extract.hpp"
#include "bta/genkit/generator.hpp"
#include "bta/genkit/prompt.hpp"
#include "bta/genkit/template.hpp"
#include "tree_gen.hpp"

namespace bta::genkit {
namespace {

const char* kListing =
    "selector:\n"
    "  sequence:\n"
    "    condition: has_enemy_in_view\n"
    "    task: shoot random_enemy_in_view\n"
    "  sequence:\n"
    "    condition: no\n"
    "    condition: has_enemy_in_view\n"
    "    task: move_to random_enemy_location\n";

std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

std::size_t occurrences(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) {
        ++n;
    }
    return n;
}

TEST(Template, Interpolation) {
    EXPECT_EQ(render("{{ a.b }}", {{"a", {{"b", "x"}}}}), "x");
    EXPECT_EQ(render("n={{n}}", {{"n", 3}}), "n=3");
}

TEST(Template, Conditionals) {
    EXPECT_EQ(render("{% if a %}Y{% endif %}", nlohmann::json::object()), "");
    EXPECT_EQ(render("{% if a %}Y{% endif %}", nlohmann::json::parse(R"({"a": ""})")), "");
    EXPECT_EQ(render("{% if a %}Y{% endif %}", {{"a", "1"}}), "Y");
    EXPECT_EQ(render("{% if a %}{% if b %}B{% endif %}A{% endif %}", {{"a", "1"}}), "A");
    // standalone tags take their line
    EXPECT_EQ(render("x\n{% if a %}\ny\n{% endif %}\nz\n", {{"a", "1"}}), "x\ny\nz\n");
    EXPECT_EQ(render("x\n  {% if a %}\ny\n{% endif %}\nz\n", nlohmann::json::object()), "x\nz\n");
}

TEST(Template, Errors) {
    EXPECT_EQ(error_code([] { render("{{ missing }}", nlohmann::json::object()); }), "unbound-path");
    EXPECT_EQ(error_code([] { render("{% if a %}open", nlohmann::json::object()); }), "unclosed-block");
    EXPECT_EQ(error_code([] { render("text {{ a", nlohmann::json::object()); }), "unclosed-block");
    EXPECT_EQ(error_code([] { render("{% for x in y %}", nlohmann::json::object()); }), "bad-syntax");
    EXPECT_EQ(error_code([] { render("{% endif %}", nlohmann::json::object()); }), "bad-syntax");
    EXPECT_EQ(error_code([] { render("{{ a..b }}", nlohmann::json::object()); }), "bad-syntax");
    try {
        render("ok\n  {{ nope }}", nlohmann::json::object());
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("2:3"), std::string::npos);
    }
}

TEST(Prompt, HistorySectionIsConditional) {
    const auto catalog = fps::shooter_catalog();
    PromptInputs in{"Deathmatch on a small map.", "Hunt enemies aggressively.", std::nullopt};
    const auto plain = render_prompt(catalog, in);
    EXPECT_EQ(plain.find("History Format Errors"), std::string::npos);
    EXPECT_EQ(plain.find("{{"), std::string::npos);
    EXPECT_EQ(plain.find("{%"), std::string::npos);
    for (const char* header :
         {"# Task\n", "## Game Scenario\n", "## Available Nodes\n", "## Tactics\n", "## DSL Format\n", "## Response\n"}) {
        EXPECT_EQ(occurrences(plain, header), 1u) << header;
    }

    in.history = PromptHistory{kListing, "line 3: unknown condition"};
    const auto with = render_prompt(catalog, in);
    EXPECT_EQ(occurrences(with, "### History Format Errors\n"), 1u);
    EXPECT_NE(with.find(kListing), std::string::npos);
    EXPECT_NE(with.find("line 3: unknown condition"), std::string::npos);
}

TEST(Prompt, EveryNodeDocAppearsOnce) {
    const auto catalog = fps::shooter_catalog();
    const auto text = render_prompt(catalog, {"scenario", "tactics", PromptHistory{"t", "m"}});
    for (const auto& c : catalog.conditions()) {
        EXPECT_EQ(occurrences(text, c.doc), 1u) << c.key;
    }
    for (const auto& a : catalog.actions()) {
        EXPECT_EQ(occurrences(text, a.doc), 1u) << a.key;
        for (const auto& p : a.params) {
            EXPECT_EQ(occurrences(text, p.doc), 1u) << p.key;
        }
    }
}

TEST(Prompt, TemplateNeedsOnlyContextPaths) {
    const auto ctx = prompt_context(fps::shooter_catalog(), {"s", "t", std::nullopt});
    for (const auto& path : required_paths(default_prompt_template())) {
        EXPECT_NE(path.rfind("history.", 0), 0u) << path;
    }
    EXPECT_NO_THROW(render(default_prompt_template(), ctx));
}

TEST(Extract, TagsAndDsl) {
    const auto ex = extract_tagged("<think>a</think><reflection>b</reflection>\n" + std::string(kListing));
    EXPECT_EQ(ex.think, "a");
    EXPECT_EQ(ex.reflection, "b");
    ASSERT_TRUE(ex.dsl);
    EXPECT_EQ(dsl::parse_or_throw(*ex.dsl), dsl::parse_or_throw(kListing));
}

TEST(Extract, NoTags) {
    const auto ex = extract_tagged(std::string("Here is the tree:\n\n") + kListing + "\nHope it helps.");
    EXPECT_TRUE(ex.think.empty());
    EXPECT_TRUE(ex.reflection.empty());
    ASSERT_TRUE(ex.dsl);
    EXPECT_EQ(*ex.dsl, kListing);
}

TEST(Extract, MalformedTags) {
    EXPECT_EQ(error_code([] { extract_tagged("<think>a<reflection>b</think>"); }), "malformed-tags");
    EXPECT_EQ(error_code([] { extract_tagged("<think>a"); }), "malformed-tags");
    EXPECT_EQ(error_code([] { extract_tagged("a</reflection>"); }), "malformed-tags");
    EXPECT_NO_THROW(extract_tagged("<think>x<reflection>y</reflection></think>"));
}

TEST(Extract, FencePreferredOverLooseLines) {
    const std::string text = std::string("task: wait\n\n```dsl\n") + kListing + "```\n";
    EXPECT_EQ(extract_dsl(text), std::string(kListing));
    const std::string indented = "Tree:\n    selector:\n      task: wait\n";
    EXPECT_EQ(extract_dsl(indented), std::string("selector:\n  task: wait\n"));
    EXPECT_FALSE(extract_dsl("no tree here").has_value());
}

TEST(Extract, DslInsideThinkIsIgnoredWhenAnAnswerExists) {
    const auto ex = extract_tagged("<think>\nselector:\n  task: patrol\n  task: wait\n</think>\n```\ntask: wait\n```");
    EXPECT_EQ(ex.dsl, std::string("task: wait\n"));
}

// Ordered-tree edit distance with unit costs (Zhang and Shasha), labels
// include negation and params.
class TreeDistance {
public:
    static int between(const dsl::BtNode& a, const dsl::BtNode& b) {
        Flat fa(a);
        Flat fb(b);
        return compute(fa, fb);
    }

private:
    struct Flat {
        std::vector<std::string> label;  // postorder
        std::vector<int> lmd;            // leftmost leaf descendant
        std::vector<int> keyroots;

        explicit Flat(const dsl::BtNode& root) {
            walk(root);
            std::map<int, int> last;
            for (int i = 0; i < static_cast<int>(lmd.size()); ++i) {
                last[lmd[static_cast<std::size_t>(i)]] = i;
            }
            for (auto& [k, v] : last) {
                keyroots.push_back(v);
            }
            std::sort(keyroots.begin(), keyroots.end());
        }

        int walk(const dsl::BtNode& n) {
            int first = -1;
            for (const auto& c : n.children) {
                const int l = walk(c);
                if (first < 0) {
                    first = l;
                }
            }
            const int me = static_cast<int>(label.size());
            std::string l = std::string(dsl::to_string(n.kind)) + "|" + n.key + "|" + (n.negated ? "!" : "") + "|" +
                            n.action + "|" + n.param.value_or("");
            label.push_back(l);
            lmd.push_back(first < 0 ? me : first);
            return lmd.back();
        }
    };

    static int compute(const Flat& a, const Flat& b) {
        const int n = static_cast<int>(a.label.size());
        const int m = static_cast<int>(b.label.size());
        std::vector<std::vector<int>> td(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(m)));
        for (int i : a.keyroots) {
            for (int j : b.keyroots) {
                const int li = a.lmd[static_cast<std::size_t>(i)];
                const int lj = b.lmd[static_cast<std::size_t>(j)];
                const int rows = i - li + 2;
                const int cols = j - lj + 2;
                std::vector<std::vector<int>> fd(static_cast<std::size_t>(rows),
                                                 std::vector<int>(static_cast<std::size_t>(cols)));
                auto F = [&](int x, int y) -> int& {
                    return fd[static_cast<std::size_t>(x - li + 1)][static_cast<std::size_t>(y - lj + 1)];
                };
                F(li - 1, lj - 1) = 0;
                for (int x = li; x <= i; ++x) {
                    F(x, lj - 1) = F(x - 1, lj - 1) + 1;
                }
                for (int y = lj; y <= j; ++y) {
                    F(li - 1, y) = F(li - 1, y - 1) + 1;
                }
                for (int x = li; x <= i; ++x) {
                    for (int y = lj; y <= j; ++y) {
                        const int ax = a.lmd[static_cast<std::size_t>(x)];
                        const int by = b.lmd[static_cast<std::size_t>(y)];
                        const int relabel =
                            a.label[static_cast<std::size_t>(x)] == b.label[static_cast<std::size_t>(y)] ? 0 : 1;
                        if (ax == li && by == lj) {
                            F(x, y) = std::min({F(x - 1, y) + 1, F(x, y - 1) + 1, F(x - 1, y - 1) + relabel});
                            td[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = F(x, y);
                        } else {
                            F(x, y) = std::min({F(x - 1, y) + 1, F(x, y - 1) + 1,
                                                F(ax - 1, by - 1) + td[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]});
                        }
                    }
                }
            }
        }
        return td[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(m - 1)];
    }
};

TEST(TreeDistance, OracleSanity) {
    const auto a = dsl::parse_or_throw("selector:\n  task: wait\n  task: patrol\n");
    EXPECT_EQ(TreeDistance::between(a, a), 0);
    EXPECT_EQ(TreeDistance::between(a, dsl::parse_or_throw("selector:\n  task: patrol\n  task: wait\n")), 2);
    EXPECT_EQ(TreeDistance::between(a, dsl::parse_or_throw("selector:\n  task: wait\n")), 1);
    EXPECT_EQ(TreeDistance::between(
                  a, dsl::parse_or_throw("selector:\n  sequence:\n    condition: is_low_health\n    task: wait\n"
                                         "  task: patrol\n")),
              2);
}

TEST(Mutate, ListingVariantsAreDistinctValidAndClose) {
    const auto catalog = fps::shooter_catalog();
    const auto listing = dsl::parse_or_throw(kListing);
    MutateGenerator gen(MutateConfig{7, {}}, catalog, listing);
    const auto records = gen.generate({"prompt", std::nullopt, 0}, 4);
    ASSERT_EQ(records.size(), 4u);
    std::vector<dsl::BtNode> trees;
    for (const auto& r : records) {
        ASSERT_TRUE(r.dsl);
        EXPECT_EQ(r.prompt, "prompt");
        const auto t = dsl::parse_or_throw(*r.dsl);
        EXPECT_TRUE(dsl::validate(t, catalog).empty() || !dsl::has_errors(dsl::validate(t, catalog)));
        EXPECT_LE(TreeDistance::between(listing, t), 2);
        EXPECT_FALSE(t == listing);
        EXPECT_EQ(std::count(trees.begin(), trees.end(), t), 0);
        trees.push_back(t);
    }
}

TEST(Mutate, Deterministic) {
    const auto catalog = fps::shooter_catalog();
    const auto listing = dsl::parse_or_throw(kListing);
    MutateGenerator a(MutateConfig{7, {}}, catalog, listing);
    MutateGenerator b(MutateConfig{7, {}}, catalog, listing);
    const GenerationRequest req{"p", std::nullopt, 3};
    const auto ra = a.generate(req, 6);
    const auto rb = b.generate(req, 6);
    ASSERT_EQ(ra.size(), rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) {
        EXPECT_EQ(ra[i].completion, rb[i].completion);
    }
    const GenerationRequest other{"p", std::nullopt, 4};
    EXPECT_NE(a.generate(other, 6)[0].completion + a.generate(other, 6)[1].completion,
              ra[0].completion + ra[1].completion);
}

TEST(Mutate, EveryOperatorStaysWithinTwoEditsOnRandomTrees) {
    const auto catalog = fps::shooter_catalog();
    Rng rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const auto tree = bta::testing::random_tree(rng, catalog);
        for (int op = 0; op < kMutationOpCount; ++op) {
            const auto m = apply_mutation(tree, static_cast<MutationOp>(op), catalog, rng);
            if (!m) {
                continue;
            }
            ASSERT_LE(TreeDistance::between(tree, *m), 2)
                << to_string(static_cast<MutationOp>(op)) << "\n"
                << dsl::to_canonical_dsl(tree) << "->\n"
                << dsl::to_canonical_dsl(*m);
        }
        const auto v = mutate(tree, catalog, rng);
        ASSERT_FALSE(dsl::has_errors(dsl::validate(v, catalog)));
    }
}

TEST(Generator, ConfigChecks) {
    GeneratorConfig cfg;
    cfg.mode = GeneratorMode::Remote;
    EXPECT_EQ(error_code([&] { cfg.check(); }), "bad-config");
    cfg.remote.url = "http://localhost:1/v1";
    cfg.remote.temperature = 2.5;
    EXPECT_EQ(error_code([&] { cfg.check(); }), "bad-config");
    cfg.remote.temperature = 0.0;
    EXPECT_NO_THROW(cfg.check());
}

class FakeEndpoint {
public:
    explicit FakeEndpoint(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
        server_.Post("/v1/chat/completions", std::move(handler));
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeEndpoint() {
        server_.stop();
        thread_.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions"; }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

TEST(Remote, ExtractsFencedListing) {
    std::atomic<int> calls{0};
    std::string seen_auth;
    nlohmann::json seen_body;
    std::mutex mu;
    FakeEndpoint endpoint([&](const httplib::Request& req, httplib::Response& res) {
        {
            std::lock_guard<std::mutex> lock(mu);
            seen_auth = req.get_header_value("Authorization");
            seen_body = nlohmann::json::parse(req.body);
        }
        const int k = calls++;
        nlohmann::json reply;
        reply["choices"] = {{{"message", {{"content", "<think>plan " + std::to_string(k) + "</think>\n```\n" +
                                                           std::string(kListing) + "```"}}}}};
        res.set_content(reply.dump(), "application/json");
    });
    RemoteConfig cfg;
    cfg.url = endpoint.url();
    cfg.model = "coder";
    cfg.api_key = "secret";
    cfg.timeout_seconds = 5;
    RemoteGenerator gen(cfg);
    const auto records = gen.generate({"design a tree", std::nullopt, 0}, 3);
    ASSERT_EQ(records.size(), 3u);
    for (const auto& r : records) {
        ASSERT_TRUE(r.dsl);
        EXPECT_EQ(dsl::parse_or_throw(*r.dsl), dsl::parse_or_throw(kListing));
        EXPECT_EQ(r.think.rfind("plan ", 0), 0u);
        EXPECT_EQ(r.mode, GeneratorMode::Remote);
    }
    EXPECT_EQ(calls.load(), 3);
    EXPECT_EQ(seen_auth, "Bearer secret");
    EXPECT_EQ(seen_body["model"], "coder");
    EXPECT_EQ(seen_body["messages"][1]["content"], "design a tree");
    EXPECT_EQ(seen_body["messages"][0]["role"], "system");
    EXPECT_EQ(seen_body["n"], 1);
}

TEST(Remote, FlagsCompletionWithoutDsl) {
    FakeEndpoint endpoint([](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"choices":[{"message":{"content":"I cannot help with that."}}]})", "application/json");
    });
    RemoteConfig cfg;
    cfg.url = endpoint.url();
    RemoteGenerator gen(cfg);
    const auto records = gen.generate({"p", std::nullopt, 0}, 1);
    ASSERT_EQ(records.size(), 1u);
    EXPECT_TRUE(records[0].flagged("no-dsl"));
}

TEST(Remote, UnavailableAfterRetries) {
    std::atomic<int> calls{0};
    FakeEndpoint endpoint([&](const httplib::Request&, httplib::Response& res) {
        ++calls;
        res.status = 503;
    });
    RemoteConfig cfg;
    cfg.url = endpoint.url();
    cfg.retries = 2;
    cfg.timeout_seconds = 2;
    RemoteGenerator gen(cfg);
    EXPECT_EQ(error_code([&] { gen.generate({"p", std::nullopt, 0}, 1); }), "generator-unavailable");
    EXPECT_EQ(calls.load(), 3);
}

TEST(Remote, TimeoutIsBounded) {
    FakeEndpoint endpoint([](const httplib::Request&, httplib::Response& res) {
        std::this_thread::sleep_for(std::chrono::milliseconds(1500));
        res.set_content(R"({"choices":[{"message":{"content":"task: wait"}}]})", "application/json");
    });
    RemoteConfig cfg;
    cfg.url = endpoint.url();
    cfg.retries = 1;
    cfg.timeout_seconds = 0.3;
    RemoteGenerator gen(cfg);
    const auto start = std::chrono::steady_clock::now();
    EXPECT_EQ(error_code([&] { gen.generate({"p", std::nullopt, 0}, 1); }), "generator-unavailable");
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_LT(elapsed, 0.3 * 2 + 0.5);
}

}  // namespace
}  // namespace bta::genkit
