#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bta/btree/policy.hpp"
#include "bta/dsl/ast.hpp"

namespace bta::scheduler {

struct LibraryEntry {
    std::string description;
    dsl::BtNode tree;
    std::optional<std::string> weights;  // directory with task-node weights

    bool operator==(const LibraryEntry&) const = default;
};

// Ordered repertoire of trees; indices are stable.
class PolicyLibrary {
public:
    PolicyLibrary() = default;
    // Throws bta::Error("bad-library") on an empty list, duplicate
    // descriptions or trees that do not validate against the shooter catalog.
    explicit PolicyLibrary(std::vector<LibraryEntry> entries);

    std::size_t size() const { return entries_.size(); }
    const LibraryEntry& at(std::size_t i) const { return entries_.at(i); }
    const std::vector<LibraryEntry>& entries() const { return entries_; }

    // Fresh compiled policies, one per entry, in library order.
    std::vector<btree::CompiledPolicy> compile() const;

    // Manifest: [{"description": ..., "tree": <tree JSON>, "weights": path?}].
    // Relative weight paths resolve against `base_dir`.
    std::string to_manifest() const;
    static PolicyLibrary from_manifest(const std::string& text, const std::string& base_dir = "");
    static PolicyLibrary load(const std::string& path);

    bool operator==(const PolicyLibrary&) const = default;

private:
    std::vector<LibraryEntry> entries_;
};

// The two-tree library used by the scheduler suite: aggressive and camper.
PolicyLibrary default_library();

}  // namespace bta::scheduler
