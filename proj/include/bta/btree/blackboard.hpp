#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "bta/core/error.hpp"
#include "bta/core/vec2.hpp"

namespace bta::btree {

struct EntityId {
    int id = -1;
    friend bool operator==(const EntityId&, const EntityId&) = default;
};

struct TickCounter {
    int ticks = 0;
    friend bool operator==(const TickCounter&, const TickCounter&) = default;
};

using BlackboardValue = std::variant<double, Vec2, EntityId, TickCounter>;

// Typed key-value store shared by the nodes of one policy for one episode.
class Blackboard {
public:
    void set(const std::string& key, BlackboardValue value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    // Throws bta::Error("unset-key") or ("type-mismatch").
    template <typename T>
    const T& get(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) {
            throw Error("unset-key", "blackboard key '" + key + "' is not set");
        }
        const T* v = std::get_if<T>(&it->second);
        if (v == nullptr) {
            throw Error("type-mismatch", "blackboard key '" + key + "' holds another type");
        }
        return *v;
    }

    void erase(const std::string& key) { values_.erase(key); }
    void erase_prefix(const std::string& prefix);
    void clear() { values_.clear(); }

    std::size_t size() const { return values_.size(); }
    std::vector<std::string> keys() const;
    // Content hash, used to check that conditions leave the board untouched.
    std::uint64_t hash() const;

    friend bool operator==(const Blackboard&, const Blackboard&) = default;

private:
    std::map<std::string, BlackboardValue> values_;
};

}  // namespace bta::btree
