#include "bta/btree/blackboard.hpp"

#include <cstring>

#include "bta/core/hash.hpp"

namespace bta::btree {

void Blackboard::erase_prefix(const std::string& prefix) {
    auto it = values_.lower_bound(prefix);
    while (it != values_.end() && it->first.compare(0, prefix.size(), prefix) == 0) {
        it = values_.erase(it);
    }
}

std::vector<std::string> Blackboard::keys() const {
    std::vector<std::string> out;
    out.reserve(values_.size());
    for (const auto& [k, v] : values_) {
        out.push_back(k);
    }
    return out;
}

namespace {

std::uint64_t mix_double(std::uint64_t h, double v) {
    std::uint8_t bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof v);
    return fnv1a64(std::span<const std::uint8_t>(bytes, sizeof bytes), h);
}

}  // namespace

std::uint64_t Blackboard::hash() const {
    std::uint64_t h = fnv1a64(std::string_view{});
    for (const auto& [k, v] : values_) {
        h = fnv1a64(k, h);
        h = fnv1a64(std::string_view("\0", 1), h);
        h = mix_double(h, static_cast<double>(v.index()));
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, double>) {
                    h = mix_double(h, x);
                } else if constexpr (std::is_same_v<T, Vec2>) {
                    h = mix_double(mix_double(h, x.x), x.y);
                } else if constexpr (std::is_same_v<T, EntityId>) {
                    h = mix_double(h, x.id);
                } else {
                    h = mix_double(h, x.ticks);
                }
            },
            v);
    }
    return h;
}

}  // namespace bta::btree
