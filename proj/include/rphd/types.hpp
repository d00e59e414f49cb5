#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace rphd {

/// Kinematic state ordered [px, vx, py, vy].
using StateVector = std::array<double, 4>;

/// Position measurement [zx, zy].
using Measurement = std::array<double, 2>;

inline constexpr std::size_t kStateDim = 4;
inline constexpr std::size_t kPx = 0;
inline constexpr std::size_t kVx = 1;
inline constexpr std::size_t kPy = 2;
inline constexpr std::size_t kVy = 3;

struct Particle {
    StateVector state{};
    double weight = 0.0;
};

/// Weighted particle approximation of the intensity at one time step.
///
/// The first `survivor_count` particles descend from the previous step, the
/// remainder are birth particles. `ancestry` is filled by resampling only and
/// holds, for each particle, the index of the pre-resampling particle it was
/// copied from.
struct ParticleSet {
    std::vector<Particle> particles;
    int step = 0;
    std::size_t survivor_count = 0;
    std::vector<std::size_t> ancestry;

    [[nodiscard]] std::size_t size() const noexcept { return particles.size(); }
    [[nodiscard]] bool empty() const noexcept { return particles.empty(); }
};

inline bool is_finite(const StateVector& x) noexcept {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

inline bool is_finite(const Measurement& z) noexcept {
    return std::isfinite(z[0]) && std::isfinite(z[1]);
}

/// Neumaier-compensated sum, evaluated serially in index order.
inline double compensated_sum(std::span<const double> values) noexcept {
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    return sum + carry;
}

/// Compensated total weight of particles[first, last).
double total_mass(std::span<const Particle> particles);
inline double total_mass(const ParticleSet& set) { return total_mass(set.particles); }

/// Nudges the largest weight in the range so that total_mass() returns `target`
/// exactly. The correction is a few ulps of `target`; weights never go negative.
void settle_mass(std::span<Particle> particles, double target);

/// Half-up rounding of a non-negative real to an integer count.
long long round_half_up(double value);

}  // namespace rphd
