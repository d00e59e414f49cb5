#include <gtest/gtest.h>

#include "rphd/models.hpp"
#include "rphd/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace rphd;
using namespace rphd::models;

namespace {

double gauss(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

TEST(Propagate, NoiseFreeStep) {
    Rng rng(1);
    const StateVector x = propagate_with_std({0.0, 3.0, 0.0, -3.0}, 1.0, NoiseStd{0.0, 0.0}, rng);
    EXPECT_EQ(x, (StateVector{3.0, 3.0, -3.0, -3.0}));
}

TEST(Propagate, ZeroStaysZero) {
    Rng rng(1);
    EXPECT_EQ(propagate_with_std({}, 1.0, NoiseStd{0.0, 0.0}, rng), StateVector{});
    EXPECT_EQ(transition_mean({}, 2.0), StateVector{});
}

TEST(Propagate, TransitionMeanUsesSamplingTime) {
    EXPECT_EQ(transition_mean({1.0, 2.0, 3.0, 4.0}, 0.5), (StateVector{2.0, 2.0, 5.0, 4.0}));
}

TEST(Propagate, PositionVelocityCovarianceMatchesNoiseGain) {
    MotionModel model;
    Rng rng(2024);
    const int n = 100000;
    const StateVector start{1.0, 0.0, 2.0, 0.0};
    const StateVector mean = transition_mean(start, model.T);
    double spp = 0.0, spv = 0.0, svv = 0.0;
    for (int i = 0; i < n; ++i) {
        const StateVector x = propagate(start, model, NoiseScale{}, rng);
        const double dp = x[kPx] - mean[kPx];
        const double dv = x[kVx] - mean[kVx];
        spp += dp * dp;
        spv += dp * dv;
        svv += dv * dv;
    }
    const double T = model.T;
    const double s2 = model.sigma_v1 * model.sigma_v1;
    EXPECT_NEAR(spp / n, std::pow(T, 4) / 4.0 * s2, 0.05 * std::pow(T, 4) / 4.0 * s2);
    EXPECT_NEAR(spv / n, std::pow(T, 3) / 2.0 * s2, 0.05 * std::pow(T, 3) / 2.0 * s2);
    EXPECT_NEAR(svv / n, T * T * s2, 0.05 * T * T * s2);
}

TEST(Propagate, AlwaysDrawsTwoNormals) {
    Rng a(9), b(9);
    propagate_with_std({}, 1.0, NoiseStd{0.0, 0.0}, a);
    b.normal();
    b.normal();
    EXPECT_EQ(a.normal(), b.normal());
}

TEST(TransitionDensity, ModeValue) {
    MotionModel model;
    const StateVector u{1.0, 2.0, -1.0, 0.5};
    const double expected = 1.0 / (2.0 * std::numbers::pi * model.sigma_v1 * model.sigma_v2);
    EXPECT_NEAR(transition_density(transition_mean(u, model.T), u, model), expected, 1e-12 * expected);
}

TEST(TransitionDensity, UnitNoiseOnFirstAxis) {
    MotionModel model;
    const StateVector u{1.0, 2.0, -1.0, 0.5};
    StateVector x = transition_mean(u, model.T);
    x[kPx] += model.T * model.T / 2.0;
    x[kVx] += model.T;
    const double expected = gauss(1.0, 0.0, model.sigma_v1) * gauss(0.0, 0.0, model.sigma_v2);
    EXPECT_NEAR(transition_density(x, u, model), expected, 1e-12 * expected);
}

TEST(TransitionDensity, OffManifoldIsZero) {
    MotionModel model;
    const StateVector u{1.0, 2.0, -1.0, 0.5};
    StateVector x = transition_mean(u, model.T);
    x[kVx] += 1.0;
    EXPECT_EQ(transition_density(x, u, model), 0.0);
}

TEST(TransitionDensity, ZeroNoiseThrows) {
    MotionModel model;
    model.sigma_v2 = 0.0;
    EXPECT_THROW(transition_density({}, {}, model), std::invalid_argument);
}

TEST(Likelihood, ModeAndOneSigma) {
    MeasurementModel model;
    const StateVector x{4.0, 1.0, -7.0, 0.0};
    const double mode = 1.0 / (2.0 * std::numbers::pi * model.sigma_w1 * model.sigma_w2);
    EXPECT_NEAR(likelihood({4.0, -7.0}, x, model), mode, 1e-15);
    EXPECT_NEAR(likelihood({4.0 + model.sigma_w1, -7.0}, x, model), mode * std::exp(-0.5), 1e-15);
}

TEST(Likelihood, OffsetPoint) {
    MeasurementModel model;
    const double expected = gauss(5.0, 0.0, 2.5) * gauss(5.0, 0.0, 2.5);
    EXPECT_NEAR(likelihood({5.0, 5.0}, {}, model), expected, 1e-15);
    EXPECT_NEAR(expected, std::exp(-4.0) / (2.0 * std::numbers::pi * 6.25), 1e-15);
}

TEST(Measure, NoiseStatistics) {
    MeasurementModel model;
    Rng rng(17);
    const int n = 100000;
    double sx = 0.0, sxx = 0.0;
    for (int i = 0; i < n; ++i) {
        const Measurement z = measure({10.0, 0.0, 20.0, 0.0}, model, rng);
        sx += z[0] - 10.0;
        sxx += (z[0] - 10.0) * (z[0] - 10.0);
    }
    EXPECT_NEAR(sx / n, 0.0, 4.0 * model.sigma_w1 / std::sqrt(n));
    EXPECT_NEAR(std::sqrt(sxx / n), model.sigma_w1, 0.01 * model.sigma_w1);
}

TEST(Birth, IntensityAtMean) {
    BirthModel model;
    const double det = 10.0 * 1.0 * 10.0 * 1.0;
    const double expected = 0.2 * std::pow(2.0 * std::numbers::pi, -2.0) / std::sqrt(det);
    EXPECT_NEAR(birth_intensity(model.mean, model), expected, 1e-15);
    EXPECT_NEAR(birth_density(model.mean, model), expected / 0.2, 1e-14);
}

TEST(Birth, ZeroMassIsZeroEverywhere) {
    BirthModel model;
    model.mass = 0.0;
    EXPECT_EQ(birth_intensity(model.mean, model), 0.0);
    EXPECT_EQ(birth_intensity({5.0, 0.0, 1.0, 1.0}, model), 0.0);
}

TEST(Birth, MonteCarloIntegralEqualsMass) {
    BirthModel model;
    Rng rng(8);
    // importance sampling from a Gaussian twice as wide as the birth density
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        StateVector x{};
        double q = 1.0;
        for (std::size_t d = 0; d < kStateDim; ++d) {
            const double sd = 2.0 * std::sqrt(model.cov_diag[d]);
            x[d] = rng.normal(model.mean[d], sd);
            q *= gauss(x[d], model.mean[d], sd);
        }
        sum += birth_intensity(x, model) / q;
    }
    EXPECT_NEAR(sum / n, 0.2, 0.002);
}

TEST(Birth, SampleMoments) {
    BirthModel model;
    Rng rng(31);
    const int n = 100000;
    StateVector s{}, ss{};
    for (int i = 0; i < n; ++i) {
        const StateVector x = birth_sample(model, rng);
        for (std::size_t d = 0; d < kStateDim; ++d) {
            s[d] += x[d];
            ss[d] += x[d] * x[d];
        }
    }
    for (std::size_t d = 0; d < kStateDim; ++d) {
        const double mean = s[d] / n;
        const double var = ss[d] / n - mean * mean;
        EXPECT_NEAR(mean, model.mean[d], 4.0 * std::sqrt(model.cov_diag[d] / n));
        EXPECT_NEAR(var, model.cov_diag[d], 0.02 * model.cov_diag[d]);
    }
}

TEST(Clutter, IntensityInsideAndOutside) {
    ClutterModel model;
    EXPECT_DOUBLE_EQ(clutter_intensity({0.0, 0.0}, model), 10.0 / (200.0 * 200.0));
    EXPECT_DOUBLE_EQ(clutter_intensity({-99.0, 99.0}, model), 2.5e-4);
    EXPECT_EQ(clutter_intensity({200.0, 0.0}, model), 0.0);
    EXPECT_DOUBLE_EQ(clutter_density({1.0, 1.0}, model), 1.0 / 40000.0);
}

TEST(Clutter, PoissonCountMoments) {
    ClutterModel model;
    Rng rng(77);
    const int scans = 10000;
    double s = 0.0, ss = 0.0;
    for (int i = 0; i < scans; ++i) {
        const auto z = clutter_sample(model, rng);
        for (const Measurement& m : z) ASSERT_TRUE(model.region.contains(m));
        s += static_cast<double>(z.size());
        ss += static_cast<double>(z.size() * z.size());
    }
    const double mean = s / scans;
    EXPECT_NEAR(mean, 10.0, 0.2);
    EXPECT_NEAR(ss / scans - mean * mean, 10.0, 0.5);
}

TEST(Models, ValidationRejectsBadValues) {
    ModelSet m;
    EXPECT_NO_THROW(m.validate());
    m.detection.p_detect = 1.5;
    EXPECT_THROW(m.validate(), std::invalid_argument);
    m = ModelSet{};
    m.clutter.rate = -1.0;
    EXPECT_THROW(m.validate(), std::invalid_argument);
    m = ModelSet{};
    m.measurement.sigma_w1 = 0.0;
    EXPECT_THROW(m.validate(), std::invalid_argument);
}
