#include "bta/genkit/mutate.hpp"

#include <algorithm>

#include "bta/core/error.hpp"
#include "bta/dsl/validate.hpp"

namespace bta::genkit {

namespace {

using Path = std::vector<std::size_t>;

void collect(const dsl::BtNode& n, Path& path, std::vector<Path>& out) {
    out.push_back(path);
    for (std::size_t i = 0; i < n.children.size(); ++i) {
        path.push_back(i);
        collect(n.children[i], path, out);
        path.pop_back();
    }
}

std::vector<Path> all_paths(const dsl::BtNode& tree) {
    std::vector<Path> out;
    Path p;
    collect(tree, p, out);
    return out;
}

dsl::BtNode& at(dsl::BtNode& tree, const Path& path) {
    dsl::BtNode* cur = &tree;
    for (auto i : path) {
        cur = &cur->children[i];
    }
    return *cur;
}

const dsl::BtNode& at(const dsl::BtNode& tree, const Path& path) {
    const dsl::BtNode* cur = &tree;
    for (auto i : path) {
        cur = &cur->children[i];
    }
    return *cur;
}

template <typename Pred>
std::vector<Path> sites(const dsl::BtNode& tree, Pred pred) {
    std::vector<Path> out;
    for (auto& p : all_paths(tree)) {
        if (pred(at(tree, p), p)) {
            out.push_back(std::move(p));
        }
    }
    return out;
}

template <typename T>
const T& pick(const std::vector<T>& v, Rng& rng) {
    return v[uniform_index(rng, v.size())];
}

bool is_leaf(const dsl::BtNode& n) { return !n.is_composite(); }

std::string random_condition(const dsl::NodeCatalog& catalog, Rng& rng, const std::string& avoid = "") {
    std::vector<std::string> keys;
    for (const auto& c : catalog.conditions()) {
        if (c.key != avoid) {
            keys.push_back(c.key);
        }
    }
    return keys.empty() ? std::string() : pick(keys, rng);
}

dsl::BtNode random_task(const dsl::NodeCatalog& catalog, Rng& rng) {
    const auto& a = pick(catalog.actions(), rng);
    std::optional<std::string> param;
    if (a.requires_param && !a.params.empty()) {
        param = pick(a.params, rng).key;
    }
    return dsl::BtNode::task(a.key, param);
}

std::optional<dsl::BtNode> swap(const dsl::BtNode& tree, Rng& rng) {
    std::vector<std::pair<Path, std::size_t>> pairs;
    for (const auto& p : all_paths(tree)) {
        const auto& n = at(tree, p);
        for (std::size_t i = 0; i + 1 < n.children.size(); ++i) {
            const auto& a = n.children[i];
            const auto& b = n.children[i + 1];
            if ((is_leaf(a) || is_leaf(b)) && !(a == b)) {
                pairs.emplace_back(p, i);
            }
        }
    }
    if (pairs.empty()) {
        return std::nullopt;
    }
    const auto& [path, i] = pick(pairs, rng);
    dsl::BtNode out = tree;
    auto& kids = at(out, path).children;
    std::swap(kids[i], kids[i + 1]);
    return out;
}

std::optional<dsl::BtNode> rekey(const dsl::BtNode& tree, const dsl::NodeCatalog& catalog, Rng& rng) {
    const auto s = sites(tree, [](const dsl::BtNode& n, const Path&) { return is_leaf(n); });
    if (s.empty()) {
        return std::nullopt;
    }
    dsl::BtNode out = tree;
    auto& n = at(out, pick(s, rng));
    if (n.kind == dsl::NodeKind::Condition) {
        if (catalog.conditions().size() < 2) {
            return std::nullopt;
        }
        n.key = random_condition(catalog, rng, n.key);
    } else {
        // A different action (and param) in the same slot.
        auto task = random_task(catalog, rng);
        if (task == n) {
            return std::nullopt;
        }
        n = std::move(task);
    }
    return out;
}

std::optional<dsl::BtNode> insert(const dsl::BtNode& tree, const dsl::NodeCatalog& catalog, Rng& rng) {
    const auto selectors =
        sites(tree, [](const dsl::BtNode& n, const Path&) { return n.kind == dsl::NodeKind::Selector; });
    dsl::BtNode out = tree;
    if (!selectors.empty() && !catalog.actions().empty() && bernoulli(rng, 0.3)) {
        auto& sel = at(out, pick(selectors, rng));
        const auto pos = uniform_index(rng, sel.children.size() + 1);
        sel.children.insert(sel.children.begin() + static_cast<long>(pos), random_task(catalog, rng));
        return out;
    }
    if (catalog.conditions().empty()) {
        return std::nullopt;
    }
    const auto all = all_paths(tree);
    const Path target = pick(all, rng);
    auto& node = at(out, target);
    std::string guard;
    if (node.kind == dsl::NodeKind::Task) {
        const auto* spec = catalog.find_action(node.action);
        if (spec != nullptr && !spec->guards.empty() && bernoulli(rng, 0.7)) {
            guard = pick(spec->guards, rng);
        }
    }
    if (guard.empty()) {
        guard = random_condition(catalog, rng);
    }
    dsl::BtNode wrapped = dsl::BtNode::sequence({dsl::BtNode::condition(guard, bernoulli(rng, 0.2)), std::move(node)});
    node = std::move(wrapped);
    return out;
}

std::optional<dsl::BtNode> remove(const dsl::BtNode& tree, Rng& rng) {
    std::vector<std::pair<Path, bool>> options;  // (site, unwrap)
    for (const auto& p : all_paths(tree)) {
        const auto& n = at(tree, p);
        if (!p.empty()) {
            Path parent(p.begin(), p.end() - 1);
            if (at(tree, parent).children.size() >= 2 && dsl::node_count(n) <= 2) {
                options.emplace_back(p, false);
            }
        }
        if (n.is_composite() && n.children.size() == 2 && n.children[0].kind == dsl::NodeKind::Condition) {
            options.emplace_back(p, true);
        }
    }
    if (options.empty()) {
        return std::nullopt;
    }
    const auto& [path, unwrap] = pick(options, rng);
    dsl::BtNode out = tree;
    if (unwrap) {
        auto& n = at(out, path);
        dsl::BtNode inner = std::move(n.children[1]);
        n = std::move(inner);
    } else {
        Path parent(path.begin(), path.end() - 1);
        auto& kids = at(out, parent).children;
        kids.erase(kids.begin() + static_cast<long>(path.back()));
    }
    return out;
}

std::optional<dsl::BtNode> negate(const dsl::BtNode& tree, Rng& rng) {
    const auto s = sites(tree, [](const dsl::BtNode& n, const Path&) { return n.kind == dsl::NodeKind::Condition; });
    if (s.empty()) {
        return std::nullopt;
    }
    dsl::BtNode out = tree;
    auto& n = at(out, pick(s, rng));
    n.negated = !n.negated;
    return out;
}

std::optional<dsl::BtNode> reparam(const dsl::BtNode& tree, const dsl::NodeCatalog& catalog, Rng& rng) {
    const auto s = sites(tree, [&](const dsl::BtNode& n, const Path&) {
        if (n.kind != dsl::NodeKind::Task) {
            return false;
        }
        const auto* spec = catalog.find_action(n.action);
        return spec != nullptr && spec->params.size() + (spec->requires_param ? 0 : 1) >= 2;
    });
    if (s.empty()) {
        return std::nullopt;
    }
    dsl::BtNode out = tree;
    auto& n = at(out, pick(s, rng));
    const auto* spec = catalog.find_action(n.action);
    std::vector<std::optional<std::string>> choices;
    if (!spec->requires_param) {
        choices.emplace_back(std::nullopt);
    }
    for (const auto& p : spec->params) {
        choices.emplace_back(p.key);
    }
    choices.erase(std::remove(choices.begin(), choices.end(), n.param), choices.end());
    n.param = pick(choices, rng);
    return out;
}

MutationOp pick_op(const MutationWeights& w, Rng& rng) {
    double total = 0.0;
    for (int i = 0; i < kMutationOpCount; ++i) {
        total += std::max(0.0, w.weight(static_cast<MutationOp>(i)));
    }
    if (total <= 0.0) {
        throw Error("bad-weights", "mutation weights sum to zero");
    }
    double r = uniform01(rng) * total;
    for (int i = 0; i < kMutationOpCount; ++i) {
        r -= std::max(0.0, w.weight(static_cast<MutationOp>(i)));
        if (r < 0.0) {
            return static_cast<MutationOp>(i);
        }
    }
    return MutationOp::Rekey;
}

}  // namespace

std::string_view to_string(MutationOp op) {
    switch (op) {
        case MutationOp::Swap: return "swap";
        case MutationOp::Rekey: return "rekey";
        case MutationOp::Insert: return "insert";
        case MutationOp::Remove: return "remove";
        case MutationOp::Negate: return "negate";
        case MutationOp::Reparam: return "reparam";
    }
    return "?";
}

double MutationWeights::weight(MutationOp op) const {
    switch (op) {
        case MutationOp::Swap: return swap;
        case MutationOp::Rekey: return rekey;
        case MutationOp::Insert: return insert;
        case MutationOp::Remove: return remove;
        case MutationOp::Negate: return negate;
        case MutationOp::Reparam: return reparam;
    }
    return 0.0;
}

std::optional<dsl::BtNode> apply_mutation(const dsl::BtNode& tree, MutationOp op, const dsl::NodeCatalog& catalog,
                                          Rng& rng) {
    switch (op) {
        case MutationOp::Swap: return swap(tree, rng);
        case MutationOp::Rekey: return rekey(tree, catalog, rng);
        case MutationOp::Insert: return insert(tree, catalog, rng);
        case MutationOp::Remove: return remove(tree, rng);
        case MutationOp::Negate: return negate(tree, rng);
        case MutationOp::Reparam: return reparam(tree, catalog, rng);
    }
    return std::nullopt;
}

dsl::BtNode mutate(const dsl::BtNode& tree, const dsl::NodeCatalog& catalog, Rng& rng,
                   const MutationWeights& weights) {
    constexpr int kAttempts = 200;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        auto candidate = apply_mutation(tree, pick_op(weights, rng), catalog, rng);
        if (!candidate || *candidate == tree) {
            continue;
        }
        if (!dsl::has_errors(dsl::validate(*candidate, catalog))) {
            return std::move(*candidate);
        }
    }
    throw Error("no-mutation", "no valid edit found after " + std::to_string(kAttempts) + " attempts");
}

std::vector<dsl::BtNode> mutate_distinct(const dsl::BtNode& tree, const dsl::NodeCatalog& catalog, int n, Rng& rng,
                                         const MutationWeights& weights) {
    std::vector<dsl::BtNode> out;
    const int max_attempts = 50 * std::max(n, 1);
    for (int attempt = 0; attempt < max_attempts && static_cast<int>(out.size()) < n; ++attempt) {
        auto candidate = mutate(tree, catalog, rng, weights);
        if (std::find(out.begin(), out.end(), candidate) == out.end()) {
            out.push_back(std::move(candidate));
        }
    }
    return out;
}

}  // namespace bta::genkit
