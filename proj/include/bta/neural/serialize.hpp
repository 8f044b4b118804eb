#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bta/neural/net.hpp"

namespace bta::neural {

// "PNET", u16 version, u32 dims x3, float32 w1 b1 w2 b2, u32 CRC-32 of all
// preceding bytes. Little endian. Values are rounded to float32 on save.
std::vector<std::uint8_t> save_params(const NetParams& params);

// Checks, in order: bad-magic, bad-version, bad-params (dims), truncated,
// non-finite-weight, bad-checksum.
NetParams load_params(std::span<const std::uint8_t> bytes);

void save_params_file(const NetParams& params, const std::string& path);
NetParams load_params_file(const std::string& path);

}  // namespace bta::neural
