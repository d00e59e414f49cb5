#pragma once

#include "rphd/models.hpp"
#include "rphd/random.hpp"
#include "rphd/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rphd::roughening {

enum class Mode {
    None,      ///< basic particle PHD filter
    Separate,  ///< Gaussian jitter added to resampled particles
    Direct,    ///< jitter folded into the propagation noise
};

Mode parse_mode(std::string_view name);
std::string_view to_string(Mode mode) noexcept;

/// Sign of the particle-count exponent in the Gordon jitter formula.
/// `Negative` gives K * E * N^(-1/d) (jitter shrinks as N grows).
enum class GordonExponent { Negative, Positive };

struct GordonConfig {
    double K = 0.2;
    GordonExponent exponent = GordonExponent::Negative;
    /// Dimensions the Gordon jitter is applied to.
    std::array<bool, kStateDim> dims{false, true, false, true};
};

struct RougheningConfig {
    Mode mode = Mode::None;
    /// Fixed per-dimension jitter std. Velocity-only by default.
    StateVector jitter_std{0.0, 0.4, 0.0, 0.4};
    /// When set, the jitter std is recomputed every step from the particle
    /// spread; `jitter_std` must then be all zero.
    std::optional<GordonConfig> gordon;
    /// Roughen only in steps whose unique-ancestor fraction is below this.
    std::optional<double> selective_threshold;
    /// Roughen only particles whose ancestor was copied more than once.
    bool overlapped_only = false;
    /// Clamp the one-step position projection of the jitter to min(sigma_w).
    bool cap_to_measurement = true;

    void validate() const;
    /// True if this configuration can never move a particle.
    [[nodiscard]] bool is_inert() const noexcept;
};

/// K * E * N^(-1/d) per dimension (or N^(+1/d) with GordonExponent::Positive).
StateVector gordon_std(double K, const StateVector& spread, std::size_t N, std::size_t d,
                       GordonExponent exponent = GordonExponent::Negative);

/// max - min of every state component over the set.
StateVector state_spread(std::span<const Particle> particles);

/// Measurement cap: each component's one-step position projection (T * std for
/// velocities, std for positions) is limited to min(sigma_w1, sigma_w2).
StateVector cap_to_measurement(const StateVector& jitter_std, double T, const models::MeasurementModel& meas);

/// Jitter std in force for `set` this step: fixed or Gordon, then capped if configured.
StateVector effective_jitter_std(const RougheningConfig& config, const ParticleSet& set,
                                 const models::MotionModel& motion, const models::MeasurementModel& meas);

/// Fraction of distinct ancestor indices. 1 when the set carries no ancestry.
double unique_ancestor_fraction(const ParticleSet& set);

/// Which particles roughening applies to this step (selective and overlapped targeting).
/// An all-false mask means the step is skipped.
std::vector<bool> roughening_mask(const RougheningConfig& config, const ParticleSet& set);

struct RoughenReport {
    std::size_t jittered = 0;
    bool skipped = false;
    std::string diagnostic;
};

/// Adds zero-mean Gaussian jitter to the targeted particles of a resampled set.
/// Weights are never touched. Dimensions whose std is 0 draw nothing, so a zero
/// jitter leaves the set bitwise unchanged and consumes no randomness.
/// A config whose mode is not Separate is a no-op reported in `diagnostic`.
ParticleSet separate_roughen(ParticleSet set, const RougheningConfig& config, const models::MotionModel& motion,
                             const models::MeasurementModel& meas, Rng& rng, RoughenReport* report = nullptr);

/// Per-axis multiplier m = sqrt(1 + (delta/sigma_v)^2) on the motion noise,
/// using the velocity components of the jitter std as the noise-channel jitter.
/// Throws std::domain_error for an axis with sigma_v = 0 and delta > 0; use
/// direct_noise_std() in that case.
models::NoiseScale direct_roughen_scale(const StateVector& jitter_std, const models::MotionModel& motion);
models::NoiseScale direct_roughen_scale(const RougheningConfig& config, const models::MotionModel& motion);

/// Absolute combined noise std sqrt(sigma_v^2 + delta^2) per axis; exactly
/// sigma_v when delta is 0.
models::NoiseStd direct_noise_std(const StateVector& jitter_std, const models::MotionModel& motion);

}  // namespace rphd::roughening
