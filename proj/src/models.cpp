#include "rphd/models.hpp"

#include <cmath>
#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace rphd::models {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343818684758586311649;

double normal_pdf(double x, double mean, double stddev) {
    const double u = (x - mean) / stddev;
    return kInvSqrt2Pi / stddev * std::exp(-0.5 * u * u);
}

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void MotionModel::validate() const {
    require(std::isfinite(T) && T > 0.0, "motion.T must be positive");
    require(std::isfinite(sigma_v1) && sigma_v1 >= 0.0, "motion.sigma_v1 must be non-negative");
    require(std::isfinite(sigma_v2) && sigma_v2 >= 0.0, "motion.sigma_v2 must be non-negative");
}

void MeasurementModel::validate() const {
    require(std::isfinite(sigma_w1) && sigma_w1 > 0.0, "measurement.sigma_w1 must be positive");
    require(std::isfinite(sigma_w2) && sigma_w2 > 0.0, "measurement.sigma_w2 must be positive");
}

void BirthModel::validate() const {
    require(std::isfinite(mass) && mass >= 0.0, "birth.mass must be non-negative");
    require(is_finite(mean), "birth.mean must be finite");
    for (double c : cov_diag)
        require(std::isfinite(c) && c > 0.0, "birth.cov diagonal entries must be positive");
}

void ClutterModel::validate() const {
    require(std::isfinite(rate) && rate >= 0.0, "clutter.rate must be non-negative");
    require(std::isfinite(region.area()) && region.x_max > region.x_min && region.y_max > region.y_min,
            "clutter.region must have positive area");
}

void DetectionModel::validate() const {
    require(p_survive >= 0.0 && p_survive <= 1.0, "detection.p_survive must lie in [0, 1]");
    require(p_detect >= 0.0 && p_detect <= 1.0, "detection.p_detect must lie in [0, 1]");
}

void ModelSet::validate() const {
    motion.validate();
    measurement.validate();
    birth.validate();
    clutter.validate();
    detection.validate();
}

StateVector transition_mean(const StateVector& s, double T) noexcept {
    return {s[kPx] + T * s[kVx], s[kVx], s[kPy] + T * s[kVy], s[kVy]};
}

StateVector propagate_with_std(const StateVector& s, double T, NoiseStd std, Rng& rng) {
    if (!is_finite(s)) throw std::invalid_argument("propagate: non-finite state");
    const double ax = std.x * rng.normal();
    const double ay = std.y * rng.normal();
    const double half_t2 = 0.5 * T * T;
    return {s[kPx] + T * s[kVx] + half_t2 * ax,
            s[kVx] + T * ax,
            s[kPy] + T * s[kVy] + half_t2 * ay,
            s[kVy] + T * ay};
}

StateVector propagate(const StateVector& s, const MotionModel& model, NoiseScale scale, Rng& rng) {
    if (!(scale.x >= 0.0) || !(scale.y >= 0.0))
        throw std::invalid_argument("propagate: noise scale must be non-negative");
    return propagate_with_std(s, model.T, {scale.x * model.sigma_v1, scale.y * model.sigma_v2}, rng);
}

double transition_density(const StateVector& x, const StateVector& u, const MotionModel& model) {
    if (!(model.sigma_v1 > 0.0) || !(model.sigma_v2 > 0.0))
        throw std::invalid_argument("transition_density: noise stds must be positive");
    if (!is_finite(x) || !is_finite(u)) throw std::invalid_argument("transition_density: non-finite state");

    const double T = model.T;
    const double half_t2 = 0.5 * T * T;
    // Noise recovered from the velocity rows of G, then checked against the position rows.
    const double ax = (x[kVx] - u[kVx]) / T;
    const double ay = (x[kVy] - u[kVy]) / T;
    const StateVector mean = transition_mean(u, T);
    constexpr double kRelTol = 1e-9;
    auto on_plane = [&](double observed, double expected) {
        const double scale = std::max({1.0, std::fabs(observed), std::fabs(expected)});
        return std::fabs(observed - expected) <= kRelTol * scale;
    };
    if (!on_plane(x[kPx], mean[kPx] + half_t2 * ax) || !on_plane(x[kPy], mean[kPy] + half_t2 * ay))
        return 0.0;
    return normal_pdf(ax, 0.0, model.sigma_v1) * normal_pdf(ay, 0.0, model.sigma_v2);
}

double likelihood(const Measurement& z, const StateVector& x, const MeasurementModel& model) {
    if (!is_finite(z) || !is_finite(x)) throw std::invalid_argument("likelihood: non-finite input");
    if (!(model.sigma_w1 > 0.0) || !(model.sigma_w2 > 0.0))
        throw std::invalid_argument("likelihood: measurement stds must be positive");
    return normal_pdf(z[0], x[kPx], model.sigma_w1) * normal_pdf(z[1], x[kPy], model.sigma_w2);
}

Measurement measure(const StateVector& x, const MeasurementModel& model, Rng& rng) {
    const double wx = model.sigma_w1 * rng.normal();
    const double wy = model.sigma_w2 * rng.normal();
    return {x[kPx] + wx, x[kPy] + wy};
}

double birth_density(const StateVector& x, const BirthModel& model) {
    double quad = 0.0;
    double det = 1.0;
    for (std::size_t i = 0; i < kStateDim; ++i) {
        const double d = x[i] - model.mean[i];
        quad += d * d / model.cov_diag[i];
        det *= model.cov_diag[i];
    }
    constexpr double kTwoPiSq = 4.0 * std::numbers::pi * std::numbers::pi;
    return std::exp(-0.5 * quad) / (kTwoPiSq * std::sqrt(det));
}

double birth_intensity(const StateVector& x, const BirthModel& model) {
    if (model.mass == 0.0) return 0.0;
    return model.mass * birth_density(x, model);
}

StateVector birth_sample(const BirthModel& model, Rng& rng) {
    StateVector x{};
    for (std::size_t i = 0; i < kStateDim; ++i)
        x[i] = model.mean[i] + std::sqrt(model.cov_diag[i]) * rng.normal();
    return x;
}

double clutter_intensity(const Measurement& z, const ClutterModel& model) {
    return model.region.contains(z) ? model.rate / model.region.area() : 0.0;
}

double clutter_density(const Measurement& z, const ClutterModel& model) {
    return model.region.contains(z) ? 1.0 / model.region.area() : 0.0;
}

std::vector<Measurement> clutter_sample(const ClutterModel& model, Rng& rng) {
    const auto count = rng.poisson(model.rate);
    std::vector<Measurement> out;
    out.reserve(count);
    const Region& r = model.region;
    for (std::uint64_t i = 0; i < count; ++i) {
        const double zx = rng.uniform(r.x_min, r.x_max);
        const double zy = rng.uniform(r.y_min, r.y_max);
        out.push_back({zx, zy});
    }
    return out;
}

}  // namespace rphd::models
