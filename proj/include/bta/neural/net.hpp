#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "bta/core/rng.hpp"

namespace bta::neural {

inline constexpr std::uint16_t kNetVersion = 1;

// Two fully connected layers: tanh hidden, softmax head.
// w1 is hidden x input, w2 is output x hidden, both row-major.
struct NetParams {
    std::array<int, 3> dims{0, 0, 0};
    std::vector<double> w1;
    std::vector<double> b1;
    std::vector<double> w2;
    std::vector<double> b2;
    std::uint16_t version = kNetVersion;

    int input_size() const { return dims[0]; }
    int hidden_size() const { return dims[1]; }
    int output_size() const { return dims[2]; }
    std::size_t parameter_count() const { return w1.size() + b1.size() + w2.size() + b2.size(); }

    static NetParams zeros(int input, int hidden, int output);
    // Gaussian weights scaled by 1/sqrt(fan_in), zero biases.
    static NetParams random(int input, int hidden, int output, Rng& rng);

    // Throws bta::Error("bad-params") on bad dims/sizes, ("non-finite-weight") on NaN/Inf.
    void check() const;

    friend bool operator==(const NetParams&, const NetParams&) = default;
};

std::vector<double> flatten(const NetParams& p);
void unflatten(std::span<const double> flat, NetParams& p);

// Rounds every value through float32, as stored on disk.
NetParams quantized(const NetParams& p);

// Probabilities over the output verbs. Throws bta::Error("dim-mismatch").
using ActionDistribution = std::vector<double>;

std::vector<double> logits(const NetParams& p, std::span<const double> x);
// `legal` (optional, output-sized) masks verbs out before normalisation.
ActionDistribution forward(const NetParams& p, std::span<const double> x, const std::vector<bool>& legal = {});

// log p(action | x) and its gradient w.r.t. every parameter, accumulated as
// grad += scale * d log p / d theta. `grad` must have the shape of `p`.
double log_prob_gradient(const NetParams& p, std::span<const double> x, int action, double scale, NetParams& grad,
                         const std::vector<bool>& legal = {});

// Lowest index among maximal entries.
int argmax(std::span<const double> probs);
int sample(std::span<const double> probs, Rng& rng);

}  // namespace bta::neural
