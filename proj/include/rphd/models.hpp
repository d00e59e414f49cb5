#pragma once

#include "rphd/random.hpp"
#include "rphd/types.hpp"

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace rphd::models {

/// Nearly-constant-velocity dynamics driven by per-axis white acceleration noise.
struct MotionModel {
    double T = 1.0;
    double sigma_v1 = 1.0;  ///< x-axis noise std
    double sigma_v2 = 0.1;  ///< y-axis noise std

    void validate() const;
};

struct MeasurementModel {
    double sigma_w1 = 2.5;
    double sigma_w2 = 2.5;

    void validate() const;
};

/// Intensity of targets spawned from a parent state, b(x|u).
using SpawnIntensity = std::function<double(const StateVector& x, const StateVector& parent)>;

/// Birth intensity mass * N(x; mean, diag(cov_diag)).
struct BirthModel {
    double mass = 0.2;
    StateVector mean{0.0, 3.0, 0.0, -3.0};
    StateVector cov_diag{10.0, 1.0, 10.0, 1.0};
    /// Absent means no spawning. No concrete kernel ships with the library.
    std::optional<SpawnIntensity> spawn;

    void validate() const;
};

/// Axis-aligned rectangle [x_min, x_max] x [y_min, y_max].
struct Region {
    double x_min = -100.0;
    double x_max = 100.0;
    double y_min = -100.0;
    double y_max = 100.0;

    [[nodiscard]] double area() const noexcept { return (x_max - x_min) * (y_max - y_min); }
    [[nodiscard]] bool contains(const Measurement& z) const noexcept {
        return z[0] >= x_min && z[0] <= x_max && z[1] >= y_min && z[1] <= y_max;
    }
};

/// Poisson clutter, uniform over `region`.
struct ClutterModel {
    double rate = 10.0;
    Region region{};

    void validate() const;
};

struct DetectionModel {
    double p_survive = 0.95;
    double p_detect = 0.95;

    void validate() const;
};

/// Everything the filter and the simulator share.
struct ModelSet {
    MotionModel motion{};
    MeasurementModel measurement{};
    BirthModel birth{};
    ClutterModel clutter{};
    DetectionModel detection{};

    void validate() const;
};

/// Per-axis multiplier on the motion noise stds.
struct NoiseScale {
    double x = 1.0;
    double y = 1.0;
};

/// Per-axis absolute noise stds driving one propagation.
struct NoiseStd {
    double x = 0.0;
    double y = 0.0;
};

/// F * state (noise-free one-step prediction).
StateVector transition_mean(const StateVector& state, double T) noexcept;

/// F * state + G * v with v ~ N(0, diag(std.x^2, std.y^2)).
/// Draws exactly two normals from `rng`, x-axis first, even when a std is 0.
StateVector propagate_with_std(const StateVector& state, double T, NoiseStd std, Rng& rng);

/// F * state + G * v where v has per-axis stds (scale.x * sigma_v1, scale.y * sigma_v2).
StateVector propagate(const StateVector& state, const MotionModel& model, NoiseScale scale, Rng& rng);

/// Transition density f(x | u). The process noise covariance has rank 2, so the
/// density is taken with respect to the 2-d noise coordinates recovered from
/// the velocity change; states off the reachable plane get 0.
double transition_density(const StateVector& x, const StateVector& u, const MotionModel& model);

/// g(z | x) = N(zx; px, sigma_w1^2) * N(zy; py, sigma_w2^2).
double likelihood(const Measurement& z, const StateVector& x, const MeasurementModel& model);

/// H * x + w.
Measurement measure(const StateVector& x, const MeasurementModel& model, Rng& rng);

double birth_intensity(const StateVector& x, const BirthModel& model);
/// Normalized birth density N(x; mean, cov).
double birth_density(const StateVector& x, const BirthModel& model);
StateVector birth_sample(const BirthModel& model, Rng& rng);

/// kappa(z): rate / area inside the region, 0 outside.
double clutter_intensity(const Measurement& z, const ClutterModel& model);
/// c(z): 1 / area inside the region, 0 outside.
double clutter_density(const Measurement& z, const ClutterModel& model);
std::vector<Measurement> clutter_sample(const ClutterModel& model, Rng& rng);

}  // namespace rphd::models
