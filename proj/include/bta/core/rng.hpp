#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace bta {

// mt19937_64 is fully specified by the standard; the helpers below avoid the
// implementation-defined std distributions so seeded runs reproduce across
// standard libraries.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt);
std::uint64_t derive_seed(std::uint64_t base, std::string_view salt);

double uniform01(Rng& rng);
std::size_t uniform_index(Rng& rng, std::size_t n);
double normal(Rng& rng);
bool bernoulli(Rng& rng, double p);

}  // namespace bta
