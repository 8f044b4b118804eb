#include "bta/neural/net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bta/core/error.hpp"

namespace bta::neural {

namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

void check_input(const NetParams& p, std::span<const double> x, const std::vector<bool>& legal) {
    if (static_cast<int>(x.size()) != p.input_size()) {
        throw Error("dim-mismatch", "expected " + std::to_string(p.input_size()) + " inputs, got " +
                                        std::to_string(x.size()));
    }
    if (!legal.empty() && static_cast<int>(legal.size()) != p.output_size()) {
        throw Error("dim-mismatch", "mask has " + std::to_string(legal.size()) + " entries for " +
                                        std::to_string(p.output_size()) + " outputs");
    }
}

std::vector<double> hidden(const NetParams& p, std::span<const double> x) {
    const auto in = sz(p.input_size());
    std::vector<double> h(sz(p.hidden_size()));
    for (std::size_t j = 0; j < h.size(); ++j) {
        double acc = p.b1[j];
        const double* row = &p.w1[j * in];
        for (std::size_t i = 0; i < in; ++i) {
            acc += row[i] * x[i];
        }
        h[j] = std::tanh(acc);
    }
    return h;
}

std::vector<double> output_logits(const NetParams& p, const std::vector<double>& h) {
    const auto hs = h.size();
    std::vector<double> z(sz(p.output_size()));
    for (std::size_t k = 0; k < z.size(); ++k) {
        double acc = p.b2[k];
        const double* row = &p.w2[k * hs];
        for (std::size_t j = 0; j < hs; ++j) {
            acc += row[j] * h[j];
        }
        z[k] = acc;
    }
    return z;
}

ActionDistribution softmax(const std::vector<double>& z, const std::vector<bool>& legal) {
    const bool masked = !legal.empty() && std::any_of(legal.begin(), legal.end(), [](bool b) { return b; });
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < z.size(); ++k) {
        if (!masked || legal[k]) {
            top = std::max(top, z[k]);
        }
    }
    ActionDistribution out(z.size(), 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        if (!masked || legal[k]) {
            out[k] = std::exp(z[k] - top);
            total += out[k];
        }
    }
    for (auto& v : out) {
        v /= total;
    }
    return out;
}

}  // namespace

NetParams NetParams::zeros(int input, int hidden, int output) {
    NetParams p;
    p.dims = {input, hidden, output};
    if (input < 1 || hidden < 1 || output < 1) {
        throw Error("bad-params", "all layer dims must be at least 1");
    }
    p.w1.assign(sz(hidden) * sz(input), 0.0);
    p.b1.assign(sz(hidden), 0.0);
    p.w2.assign(sz(output) * sz(hidden), 0.0);
    p.b2.assign(sz(output), 0.0);
    return p;
}

NetParams NetParams::random(int input, int hidden, int output, Rng& rng) {
    NetParams p = zeros(input, hidden, output);
    const double s1 = 1.0 / std::sqrt(static_cast<double>(input));
    const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
    for (auto& w : p.w1) {
        w = normal(rng) * s1;
    }
    for (auto& w : p.w2) {
        w = normal(rng) * s2;
    }
    return p;
}

void NetParams::check() const {
    const auto [in, hid, out] = dims;
    if (in < 1 || hid < 1 || out < 1) {
        throw Error("bad-params", "all layer dims must be at least 1");
    }
    if (w1.size() != sz(in) * sz(hid) || b1.size() != sz(hid) || w2.size() != sz(hid) * sz(out) ||
        b2.size() != sz(out)) {
        throw Error("bad-params", "parameter arrays do not match layer dims");
    }
    for (const auto* v : {&w1, &b1, &w2, &b2}) {
        for (double x : *v) {
            if (!std::isfinite(x)) {
                throw Error("non-finite-weight", "parameters contain NaN or Inf");
            }
        }
    }
}

std::vector<double> flatten(const NetParams& p) {
    std::vector<double> flat;
    flat.reserve(p.parameter_count());
    for (const auto* v : {&p.w1, &p.b1, &p.w2, &p.b2}) {
        flat.insert(flat.end(), v->begin(), v->end());
    }
    return flat;
}

void unflatten(std::span<const double> flat, NetParams& p) {
    if (flat.size() != p.parameter_count()) {
        throw Error("dim-mismatch", "flat parameter vector has the wrong length");
    }
    std::size_t at = 0;
    for (auto* v : {&p.w1, &p.b1, &p.w2, &p.b2}) {
        std::copy(flat.begin() + static_cast<std::ptrdiff_t>(at),
                  flat.begin() + static_cast<std::ptrdiff_t>(at + v->size()), v->begin());
        at += v->size();
    }
}

NetParams quantized(const NetParams& p) {
    NetParams q = p;
    for (auto* v : {&q.w1, &q.b1, &q.w2, &q.b2}) {
        for (auto& x : *v) {
            x = static_cast<double>(static_cast<float>(x));
        }
    }
    return q;
}

std::vector<double> logits(const NetParams& p, std::span<const double> x) {
    check_input(p, x, {});
    return output_logits(p, hidden(p, x));
}

ActionDistribution forward(const NetParams& p, std::span<const double> x, const std::vector<bool>& legal) {
    check_input(p, x, legal);
    return softmax(output_logits(p, hidden(p, x)), legal);
}

double log_prob_gradient(const NetParams& p, std::span<const double> x, int action, double scale, NetParams& grad,
                         const std::vector<bool>& legal) {
    check_input(p, x, legal);
    if (grad.dims != p.dims) {
        throw Error("dim-mismatch", "gradient buffer has different dims");
    }
    if (action < 0 || action >= p.output_size()) {
        throw Error("dim-mismatch", "action index out of range");
    }
    const auto h = hidden(p, x);
    const auto probs = softmax(output_logits(p, h), legal);
    const auto in = sz(p.input_size());
    const auto hs = h.size();
    std::vector<double> dz(probs.size());
    for (std::size_t k = 0; k < dz.size(); ++k) {
        dz[k] = ((static_cast<int>(k) == action) ? 1.0 : 0.0) - probs[k];
    }
    std::vector<double> dh(hs, 0.0);
    for (std::size_t k = 0; k < dz.size(); ++k) {
        if (dz[k] == 0.0) {
            continue;
        }
        const double g = scale * dz[k];
        grad.b2[k] += g;
        for (std::size_t j = 0; j < hs; ++j) {
            grad.w2[k * hs + j] += g * h[j];
            dh[j] += dz[k] * p.w2[k * hs + j];
        }
    }
    for (std::size_t j = 0; j < hs; ++j) {
        const double da = scale * dh[j] * (1.0 - h[j] * h[j]);
        grad.b1[j] += da;
        for (std::size_t i = 0; i < in; ++i) {
            grad.w1[j * in + i] += da * x[i];
        }
    }
    return std::log(probs[static_cast<std::size_t>(action)]);
}

int argmax(std::span<const double> probs) {
    int best = 0;
    for (std::size_t k = 1; k < probs.size(); ++k) {
        if (probs[k] > probs[static_cast<std::size_t>(best)]) {
            best = static_cast<int>(k);
        }
    }
    return best;
}

int sample(std::span<const double> probs, Rng& rng) {
    const double u = uniform01(rng);
    double acc = 0.0;
    int last = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] <= 0.0) {
            continue;
        }
        acc += probs[k];
        last = static_cast<int>(k);
        if (u < acc) {
            return last;
        }
    }
    return last;
}

}  // namespace bta::neural
