#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace bta {

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a64(std::span<const std::uint8_t> data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint32_t crc32(std::span<const std::uint8_t> data);
std::string hex64(std::uint64_t v);

}  // namespace bta
