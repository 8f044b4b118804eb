#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numeric>

#include "bta/core/error.hpp"
#include "bta/neural/serialize.hpp"
#include "bta/neural/train.hpp"

namespace bta::neural {
namespace {

std::vector<double> random_input(Rng& rng, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) {
        v = 2.0 * uniform01(rng) - 1.0;
    }
    return x;
}

std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

TEST(Net, ZeroWeightsGiveUniform) {
    const auto p = NetParams::zeros(5, 4, 3);
    const auto probs = forward(p, std::vector<double>(5, 0.3));
    for (double q : probs) {
        EXPECT_NEAR(q, 1.0 / 3.0, 1e-12);
    }
    EXPECT_EQ(argmax(probs), 0);
}

TEST(Net, ExtremeLogitsStayFinite) {
    auto p = NetParams::zeros(2, 2, 3);
    p.b2 = {1e4, -1e4, 0.0};
    const auto probs = forward(p, std::vector<double>{1.0, -1.0});
    EXPECT_NEAR(probs[0], 1.0, 1e-12);
    for (double q : probs) {
        EXPECT_TRUE(std::isfinite(q));
    }
}

TEST(Net, MaskRemovesIllegalOutputs) {
    Rng rng(2);
    const auto p = NetParams::random(4, 6, 3, rng);
    const auto probs = forward(p, random_input(rng, 4), {true, false, true});
    EXPECT_EQ(probs[1], 0.0);
    EXPECT_NEAR(probs[0] + probs[2], 1.0, 1e-12);
}

TEST(Net, DimensionMismatchThrows) {
    const auto p = NetParams::zeros(5, 4, 3);
    EXPECT_EQ(error_code([&] { forward(p, std::vector<double>(4, 0.0)); }), "dim-mismatch");
}

TEST(Net, GradientMatchesFiniteDifferences) {
    Rng rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const auto p = NetParams::random(6, 5, 4, rng);
        const auto x = random_input(rng, 6);
        const int action = static_cast<int>(uniform_index(rng, 4));
        const std::vector<bool> legal = {true, true, trial % 2 == 0, true};
        if (!legal[static_cast<std::size_t>(action)]) {
            continue;
        }
        auto grad = NetParams::zeros(6, 5, 4);
        log_prob_gradient(p, x, action, 1.0, grad, legal);
        const auto analytic = flatten(grad);
        auto flat = flatten(p);
        const double h = 1e-6;
        for (std::size_t i = 0; i < flat.size(); ++i) {
            auto plus = p;
            auto minus = p;
            auto fp = flat;
            auto fm = flat;
            fp[i] += h;
            fm[i] -= h;
            unflatten(fp, plus);
            unflatten(fm, minus);
            const double lp = std::log(forward(plus, x, legal)[static_cast<std::size_t>(action)]);
            const double lm = std::log(forward(minus, x, legal)[static_cast<std::size_t>(action)]);
            ASSERT_NEAR(analytic[i], (lp - lm) / (2 * h), 1e-5) << "parameter " << i;
        }
    }
}

TEST(Net, SampleFollowsDistribution) {
    Rng rng(1);
    const std::vector<double> probs = {0.2, 0.0, 0.8};
    std::array<int, 3> counts{};
    for (int i = 0; i < 10000; ++i) {
        ++counts[static_cast<std::size_t>(sample(probs, rng))];
    }
    EXPECT_EQ(counts[1], 0);
    EXPECT_NEAR(counts[2] / 10000.0, 0.8, 0.02);
}

TEST(Serialize, RoundTripIsFloat32Exact) {
    Rng rng(3);
    const auto p = NetParams::random(kTaskObservationSize, 8, kMoveOutputs, rng);
    const auto loaded = load_params(save_params(p));
    EXPECT_EQ(loaded, quantized(p));
    EXPECT_EQ(save_params(loaded), save_params(p));
}

TEST(Serialize, ErrorCodes) {
    Rng rng(3);
    const auto p = NetParams::random(4, 3, 2, rng);
    const auto bytes = save_params(p);

    auto magic = bytes;
    magic[0] = 'Q';
    EXPECT_EQ(error_code([&] { load_params(magic); }), "bad-magic");

    auto version = bytes;
    version[4] = 9;
    EXPECT_EQ(error_code([&] { load_params(version); }), "bad-version");

    auto dims = bytes;
    dims[6] = 0;
    EXPECT_EQ(error_code([&] { load_params(dims); }), "bad-params");

    auto truncated = bytes;
    truncated.resize(truncated.size() - 6);
    EXPECT_EQ(error_code([&] { load_params(truncated); }), "truncated");

    auto nan = bytes;
    const float bad = std::numeric_limits<float>::quiet_NaN();
    std::memcpy(nan.data() + 18, &bad, sizeof bad);
    EXPECT_EQ(error_code([&] { load_params(nan); }), "non-finite-weight");

    auto flipped = bytes;
    flipped[20] ^= 0x01;
    EXPECT_EQ(error_code([&] { load_params(flipped); }), "bad-checksum");
}

TEST(Features, RangeAndSize) {
    Rng rng(4);
    const auto map = arena::random_wall_map(16, 16, 6, rng);
    for (int i = 0; i < 100; ++i) {
        const arena::Cell c{static_cast<int>(uniform_index(rng, 16)), static_cast<int>(uniform_index(rng, 16))};
        if (map.blocked(c)) {
            continue;
        }
        const auto f = encode_task_observation(map, arena::cell_center(c), {0.0, 1.0}, {3.5, 9.5});
        ASSERT_EQ(static_cast<int>(f.size()), kTaskObservationSize);
        for (double v : f) {
            ASSERT_GE(v, -1.0);
            ASSERT_LE(v, 1.0);
        }
        const auto legal = move_legality(map, arena::cell_center(c));
        EXPECT_TRUE(legal[kMoveWait]);
    }
}

TEST(Train, ZeroIterationsReturnsInitialisation) {
    MoveToEnvironment env(wall_map_sampler());
    TrainConfig cfg;
    cfg.iterations = 0;
    EXPECT_EQ(train_task_node(env, cfg), initial_params(cfg, kMoveOutputs));
}

TEST(Train, SeededTrainingIsDeterministic) {
    TrainConfig cfg;
    cfg.iterations = 3;
    cfg.episodes_per_iteration = 8;
    MoveToEnvironment a(wall_map_sampler());
    MoveToEnvironment b(wall_map_sampler());
    EXPECT_EQ(train_task_node(a, cfg), train_task_node(b, cfg));
}

TEST(Train, DivergenceIsReported) {
    class Exploding : public TaskEnvironment {
    public:
        int action_count() const override { return 2; }
        void reset(Rng&) override { t_ = 0; }
        TaskObservation observe() const override { return TaskObservation(kTaskObservationSize, 0.5); }
        std::vector<bool> legal() const override { return {true, true}; }
        double act(int a) override {
            ++t_;
            return a == 0 ? std::numeric_limits<double>::infinity() : 0.0;
        }
        bool done() const override { return t_ >= 2; }

    private:
        int t_ = 0;
    } env;
    TrainConfig cfg;
    cfg.iterations = 2;
    cfg.episodes_per_iteration = 4;
    const auto code = error_code([&] { train_task_node(env, cfg); });
    EXPECT_EQ(code, "diverged");
}

TEST(Train, ShootPolicyLearnsToKill) {
    ShootEnvironment env(wall_map_sampler());
    TrainConfig cfg;
    cfg.iterations = 40;
    cfg.episodes_per_iteration = 32;
    TrainReport report;
    train_task_node(env, cfg, &report);
    ASSERT_EQ(report.mean_return.size(), 40u);
    EXPECT_GT(report.mean_return.back(), report.mean_return.front());
    // four hits kill a full-health target
    EXPECT_GT(report.mean_return.back(), 3.5);
}

}  // namespace
}  // namespace bta::neural
