#include <gtest/gtest.h>

#include "bta/core/rng.hpp"
#include "bta/dsl/dsl.hpp"
#include "bta/fps/catalog.hpp"
#include "bta/fps/scenarios.hpp"
#include "tree_gen.hpp"

namespace bta::dsl {
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

std::string first_code(std::string_view src) {
    const auto r = parse(src);
    EXPECT_FALSE(r.ok());
    return r.diagnostics.empty() ? "" : r.diagnostics.front().code;
}

TEST(Parse, ListingStructure) {
    const auto tree = parse_or_throw(kListing);
    const auto expected = BtNode::selector({
        BtNode::sequence({BtNode::condition("has_enemy_in_view"), BtNode::task("shoot", "random_enemy_in_view")}),
        BtNode::sequence(
            {BtNode::condition("has_enemy_in_view", true), BtNode::task("move_to", "random_enemy_location")}),
    });
    EXPECT_EQ(tree, expected);
    EXPECT_EQ(node_count(tree), 7u);
    EXPECT_EQ(tree_depth(tree), 3u);
}

TEST(Parse, NegatedConditionSpanPointsAtMarker) {
    const auto tree = parse_or_throw(kListing);
    EXPECT_EQ(tree.children[1].children[0].span.line, 6);
    EXPECT_EQ(tree.children[1].children[0].span.column, 5);
}

TEST(Parse, MinimalTree) {
    const auto tree = parse_or_throw("selector:\n  task: idle");
    ASSERT_EQ(tree.children.size(), 1u);
    EXPECT_EQ(tree.children[0].action, "idle");
    EXPECT_FALSE(tree.children[0].param.has_value());
}

TEST(Parse, LeafRootAndNegatedLeafRoot) {
    EXPECT_EQ(parse_or_throw("task: wait\n"), BtNode::task("wait"));
    EXPECT_EQ(parse_or_throw("condition: no\ncondition: is_low_health\n"), BtNode::condition("is_low_health", true));
}

TEST(Parse, ColonWithoutSpaceIsAccepted) {
    EXPECT_EQ(parse_or_throw("selector:\n  condition:is_low_health\n"),
              BtNode::selector({BtNode::condition("is_low_health")}));
}

TEST(Parse, CommentsAndBlankLinesIgnored) {
    EXPECT_EQ(parse_or_throw("# policy\nselector:\n\n  # fallback\n  task: wait\n"),
              BtNode::selector({BtNode::task("wait")}));
}

TEST(ParseErrors, DanglingNegationAtLineTwo) {
    const auto r = parse("sequence:\n  condition: no\n  task: shoot x");
    ASSERT_FALSE(r.ok());
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.diagnostics[0].code, "dangling-negation");
    EXPECT_EQ(r.diagnostics[0].span.line, 2);
}

TEST(ParseErrors, Codes) {
    EXPECT_EQ(first_code("selector:\n\ttask: wait\n"), "tabs-forbidden");
    EXPECT_EQ(first_code("selector:\n   task: wait\n"), "bad-indent");
    EXPECT_EQ(first_code("selector:\n      task: wait\n"), "bad-indent");
    EXPECT_EQ(first_code("  selector:\n    task: wait\n"), "bad-indent");
    EXPECT_EQ(first_code("sequence:\n  task: wait\n    task: wait\n"), "leaf-has-children");
    EXPECT_EQ(first_code("sequence:\n  condition: is_low_health\n    task: wait\n"), "leaf-has-children");
    EXPECT_EQ(first_code("parallel:\n  task: wait\n"), "unknown-node");
    EXPECT_EQ(first_code("selector:\n  sequence:\n  task: wait\n"), "empty-composite");
    EXPECT_EQ(first_code("selector:\n"), "empty-composite");
    EXPECT_EQ(first_code("task: wait\ntask: wait\n"), "multiple-roots");
    EXPECT_EQ(first_code(""), "empty-source");
    EXPECT_EQ(first_code("# nothing\n\n"), "empty-source");
    EXPECT_EQ(first_code("task: Shoot\n"), "bad-syntax");
    EXPECT_EQ(first_code("task: shoot a b\n"), "bad-syntax");
    EXPECT_EQ(first_code("task:\n"), "bad-syntax");
    EXPECT_EQ(first_code("condition: a b\n"), "bad-syntax");
    EXPECT_EQ(first_code("selector: x\n  task: wait\n"), "bad-syntax");
    EXPECT_EQ(first_code("selector\n  task: wait\n"), "bad-syntax");
    EXPECT_EQ(first_code("sequence:\n  condition: no\n  condition: no\n  condition: x\n"), "dangling-negation");
}

TEST(ParseErrors, NestingLimit) {
    std::string src;
    for (int i = 0; i <= kMaxNesting + 1; ++i) {
        src += std::string(static_cast<std::size_t>(i) * 2, ' ') + "sequence:\n";
    }
    EXPECT_EQ(first_code(src), "too-deep");
}

TEST(ParseErrors, SpansPointInsideSource) {
    const std::string src = "selector:\n  sequence:\n    condition: no\n    task: wait\n";
    const auto r = parse(src);
    ASSERT_FALSE(r.ok());
    for (const auto& d : r.diagnostics) {
        EXPECT_GE(d.span.line, 1);
        EXPECT_LE(d.span.line, 4);
        EXPECT_GE(d.span.column, 1);
    }
}

TEST(Print, ListingIsCanonical) { EXPECT_EQ(to_canonical_dsl(parse_or_throw(kListing)), kListing); }

TEST(Print, MinimalTree) {
    EXPECT_EQ(to_canonical_dsl(BtNode::selector({BtNode::task("idle")})), "selector:\n  task: idle\n");
}

TEST(RoundTrip, RandomTreesThroughTextAndJson) {
    const auto catalog = fps::shooter_catalog();
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        const auto t = testing::random_tree(rng, catalog);
        ASSERT_EQ(parse_or_throw(to_canonical_dsl(t)), t) << to_canonical_dsl(t);
        ASSERT_EQ(from_json(to_json(t)), t);
    }
}

TEST(RoundTrip, NegationFusionRemovesOneSiblingPerMarker) {
    const auto t = parse_or_throw(
        "sequence:\n  condition: no\n  condition: a\n  condition: b\n  condition: no\n  condition: c\n");
    EXPECT_EQ(t.children.size(), 3u);
    EXPECT_TRUE(t.children[0].negated);
    EXPECT_FALSE(t.children[1].negated);
    EXPECT_TRUE(t.children[2].negated);
}

TEST(Json, ListingDocumentShape) {
    const auto text = to_json(parse_or_throw(kListing));
    EXPECT_NE(text.find("\"type\": \"selector\""), std::string::npos);
    const auto back = from_json(text);
    EXPECT_EQ(back.children.size(), 2u);
}

TEST(Json, SchemaErrorsCarryPointers) {
    auto pointer_of = [](const std::string& doc) {
        try {
            from_json(doc);
        } catch (const SchemaError& e) {
            EXPECT_EQ(e.code(), "bad-schema");
            return e.pointer();
        }
        ADD_FAILURE() << "accepted " << doc;
        return std::string();
    };
    EXPECT_EQ(pointer_of("{}"), "/type");
    EXPECT_EQ(pointer_of(R"({"version":1,"root":{"type":"selector","children":[]}})"), "/root/children");
    EXPECT_EQ(pointer_of(R"({"version":2,"root":{"type":"task","action":"wait"}})"), "/version");
    EXPECT_EQ(pointer_of(R"({"type":"selector","children":[{"type":"task"}]})"), "/children/0/action");
    EXPECT_EQ(pointer_of(R"({"type":"condition","key":"Bad"})"), "/key");
    EXPECT_EQ(pointer_of(R"({"type":"task","action":"wait","extra":1})"), "/extra");
    EXPECT_EQ(pointer_of("[1,2]"), "");
    EXPECT_THROW(from_json("not json"), SchemaError);
}

TEST(Validate, ListingAgainstShooterCatalog) {
    EXPECT_TRUE(validate(parse_or_throw(kListing), fps::shooter_catalog()).empty());
}

TEST(Validate, UnknownKeysAndParams) {
    const NodeCatalog catalog({{"has_enemy_in_view", ""}},
                              {{"shoot", "", {{"random_enemy_in_view", ""}}, false, {}}, {"wait", "", {}, false, {}}});
    auto codes = [&](const BtNode& t) {
        std::vector<std::string> out;
        for (const auto& d : validate(t, catalog)) {
            out.push_back(d.code);
        }
        return out;
    };
    EXPECT_EQ(codes(BtNode::selector({BtNode::condition("never_defined")})),
              std::vector<std::string>{"unknown-condition"});
    EXPECT_EQ(codes(BtNode::selector({BtNode::task("shoot", "bad_param")})), std::vector<std::string>{"bad-param"});
    EXPECT_EQ(codes(BtNode::task("fly")), std::vector<std::string>{"unknown-action"});
    EXPECT_EQ(codes(BtNode::task("wait", "now")), std::vector<std::string>{"bad-param"});
}

TEST(Validate, MissingRequiredParam) {
    const auto d = validate(BtNode::task("shoot"), fps::shooter_catalog());
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].code, "missing-param");
}

TEST(Validate, WarningsAndLimits) {
    const auto catalog = fps::shooter_catalog();
    const auto dup = BtNode::selector({BtNode::task("wait"), BtNode::task("wait")});
    const auto d = validate(dup, catalog);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].code, "duplicate-sibling");
    EXPECT_EQ(d[0].severity, Severity::Warning);
    EXPECT_FALSE(has_errors(d));

    BtNode deep = BtNode::task("wait");
    for (int i = 0; i < 12; ++i) {
        deep = BtNode::sequence({deep});
    }
    const auto dd = validate(deep, catalog);
    ASSERT_FALSE(dd.empty());
    EXPECT_EQ(dd[0].code, "too-deep");
    EXPECT_FALSE(has_errors(dd));

    std::vector<BtNode> many;
    for (int i = 0; i < 300; ++i) {
        many.push_back(BtNode::condition("is_low_health", i % 2 == 0));
    }
    EXPECT_TRUE(has_errors(validate(BtNode::sequence(many), catalog)));
}

TEST(Validate, Deterministic) {
    const auto catalog = fps::shooter_catalog();
    const auto t = parse_or_throw("selector:\n  task: wait\n  task: wait\n  condition: nope\n");
    EXPECT_EQ(validate(t, catalog), validate(t, catalog));
}

TEST(Catalog, RejectsDuplicatesAndBadKeys) {
    EXPECT_THROW(NodeCatalog({{"a", ""}, {"a", ""}}, {}), Error);
    EXPECT_THROW(NodeCatalog({{"no", ""}}, {}), Error);
    EXPECT_THROW(NodeCatalog({{"Bad", ""}}, {}), Error);
    EXPECT_THROW(NodeCatalog({}, {{"shoot", "", {}, true, {}}}), Error);
}

TEST(Catalog, JsonRoundTrip) {
    const auto catalog = fps::shooter_catalog();
    const auto back = NodeCatalog::from_json(catalog.to_json());
    EXPECT_EQ(back.to_json(), catalog.to_json());
    EXPECT_EQ(back.actions().size(), catalog.actions().size());
    EXPECT_TRUE(back.permits_param("shoot", "weakest_enemy_in_view"));
}

TEST(KnownTrees, ShippedTreesValidate) {
    const auto catalog = fps::shooter_catalog();
    for (const auto* text : {&fps::aggressive_tree_text(), &fps::turret_tree_text(), &fps::camper_tree_text()}) {
        EXPECT_FALSE(has_errors(validate(parse_or_throw(*text), catalog)));
    }
}

}  // namespace
}  // namespace bta::dsl
