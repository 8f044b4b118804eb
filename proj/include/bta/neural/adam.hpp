#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace bta::neural {

// Adam optimiser over a flat parameter vector.
class Adam {
public:
    explicit Adam(std::size_t n, double lr) : lr_(lr), m_(n, 0.0), v_(n, 0.0) {}

    // Gradient ascent step.
    void step(std::vector<double>& theta, const std::vector<double>& g) {
        ++t_;
        const double c1 = 1.0 - std::pow(kBeta1, t_);
        const double c2 = 1.0 - std::pow(kBeta2, t_);
        for (std::size_t i = 0; i < theta.size(); ++i) {
            m_[i] = kBeta1 * m_[i] + (1.0 - kBeta1) * g[i];
            v_[i] = kBeta2 * v_[i] + (1.0 - kBeta2) * g[i] * g[i];
            theta[i] += lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + kEps);
        }
    }

private:
    static constexpr double kBeta1 = 0.9;
    static constexpr double kBeta2 = 0.999;
    static constexpr double kEps = 1e-8;

    double lr_;
    int t_ = 0;
    std::vector<double> m_;
    std::vector<double> v_;
};

}  // namespace bta::neural
