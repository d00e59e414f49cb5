#include "rphd/roughening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace rphd::roughening {

Mode parse_mode(std::string_view name) {
    if (name == "none" || name == "basic") return Mode::None;
    if (name == "separate") return Mode::Separate;
    if (name == "direct") return Mode::Direct;
    throw std::invalid_argument("unknown roughening mode '" + std::string(name) + "'");
}

std::string_view to_string(Mode mode) noexcept {
    switch (mode) {
        case Mode::None: return "none";
        case Mode::Separate: return "separate";
        case Mode::Direct: return "direct";
    }
    return "none";
}

void RougheningConfig::validate() const {
    for (double s : jitter_std)
        if (!std::isfinite(s) || s < 0.0) throw std::invalid_argument("roughening jitter_std must be finite and >= 0");
    if (gordon) {
        if (!std::isfinite(gordon->K) || gordon->K < 0.0) throw std::invalid_argument("roughening gordon K must be >= 0");
        if (std::any_of(jitter_std.begin(), jitter_std.end(), [](double s) { return s > 0.0; }))
            throw std::invalid_argument("roughening: fixed jitter_std and gordon are mutually exclusive");
    }
    if (selective_threshold && !(*selective_threshold > 0.0 && *selective_threshold <= 1.0))
        throw std::invalid_argument("roughening selective threshold must lie in (0, 1]");
}

bool RougheningConfig::is_inert() const noexcept {
    if (mode == Mode::None) return true;
    if (gordon) return gordon->K == 0.0;
    return std::all_of(jitter_std.begin(), jitter_std.end(), [](double s) { return s == 0.0; });
}

StateVector gordon_std(double K, const StateVector& spread, std::size_t N, std::size_t d, GordonExponent exponent) {
    if (N < 1 || d < 1) throw std::invalid_argument("gordon_std: N and d must be >= 1");
    const double power = (exponent == GordonExponent::Negative ? -1.0 : 1.0) / static_cast<double>(d);
    const double factor = K * std::pow(static_cast<double>(N), power);
    StateVector out{};
    for (std::size_t i = 0; i < kStateDim; ++i) out[i] = factor * spread[i];
    return out;
}

StateVector state_spread(std::span<const Particle> particles) {
    StateVector out{};
    if (particles.empty()) return out;
    StateVector lo = particles.front().state;
    StateVector hi = lo;
    for (const Particle& p : particles) {
        for (std::size_t i = 0; i < kStateDim; ++i) {
            lo[i] = std::min(lo[i], p.state[i]);
            hi[i] = std::max(hi[i], p.state[i]);
        }
    }
    for (std::size_t i = 0; i < kStateDim; ++i) out[i] = hi[i] - lo[i];
    return out;
}

StateVector cap_to_measurement(const StateVector& jitter_std, double T, const models::MeasurementModel& meas) {
    const double limit = std::min(meas.sigma_w1, meas.sigma_w2);
    StateVector out = jitter_std;
    for (std::size_t i : {kPx, kPy}) out[i] = std::min(out[i], limit);
    for (std::size_t i : {kVx, kVy})
        if (T * out[i] > limit) out[i] = limit / T;
    return out;
}

StateVector effective_jitter_std(const RougheningConfig& config, const ParticleSet& set,
                                 const models::MotionModel& motion, const models::MeasurementModel& meas) {
    StateVector jitter = config.jitter_std;
    if (config.gordon) {
        const StateVector spread = state_spread(set.particles);
        const StateVector full = gordon_std(config.gordon->K, spread, std::max<std::size_t>(set.size(), 1), kStateDim,
                                            config.gordon->exponent);
        for (std::size_t i = 0; i < kStateDim; ++i) jitter[i] = config.gordon->dims[i] ? full[i] : 0.0;
    }
    if (config.cap_to_measurement) jitter = cap_to_measurement(jitter, motion.T, meas);
    return jitter;
}

double unique_ancestor_fraction(const ParticleSet& set) {
    if (set.ancestry.empty()) return 1.0;
    std::vector<std::size_t> sorted = set.ancestry;
    std::sort(sorted.begin(), sorted.end());
    const auto unique = static_cast<double>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    return unique / static_cast<double>(set.ancestry.size());
}

std::vector<bool> roughening_mask(const RougheningConfig& config, const ParticleSet& set) {
    std::vector<bool> mask(set.size(), config.mode != Mode::None);
    if (config.mode == Mode::None) return mask;

    if (config.selective_threshold && !(unique_ancestor_fraction(set) < *config.selective_threshold)) {
        std::fill(mask.begin(), mask.end(), false);
        return mask;
    }
    if (config.overlapped_only) {
        if (set.ancestry.size() != set.size()) {
            // no ancestry means nothing was copied
            std::fill(mask.begin(), mask.end(), false);
            return mask;
        }
        std::unordered_map<std::size_t, std::size_t> copies;
        for (std::size_t a : set.ancestry) ++copies[a];
        for (std::size_t i = 0; i < set.size(); ++i) mask[i] = copies[set.ancestry[i]] > 1;
    }
    return mask;
}

ParticleSet separate_roughen(ParticleSet set, const RougheningConfig& config, const models::MotionModel& motion,
                             const models::MeasurementModel& meas, Rng& rng, RoughenReport* report) {
    RoughenReport local;
    RoughenReport& rep = report ? *report : local;
    rep = {};
    if (config.mode != Mode::Separate) {
        rep.skipped = true;
        rep.diagnostic = "separate_roughen called with mode '" + std::string(to_string(config.mode)) + "'";
        return set;
    }

    const StateVector jitter = effective_jitter_std(config, set, motion, meas);
    const std::vector<bool> mask = roughening_mask(config, set);
    if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; })) {
        rep.skipped = true;
        return set;
    }
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (!mask[i]) continue;
        bool moved = false;
        for (std::size_t d = 0; d < kStateDim; ++d) {
            if (jitter[d] == 0.0) continue;
            set.particles[i].state[d] += jitter[d] * rng.normal();
            moved = true;
        }
        if (moved) ++rep.jittered;
    }
    return set;
}

models::NoiseScale direct_roughen_scale(const StateVector& jitter_std, const models::MotionModel& motion) {
    auto axis = [](double sigma, double delta) {
        if (delta == 0.0) return 1.0;
        if (sigma == 0.0)
            throw std::domain_error("direct_roughen_scale: multiplier undefined for zero motion noise; use direct_noise_std");
        const double ratio = delta / sigma;
        return std::sqrt(1.0 + ratio * ratio);
    };
    return {axis(motion.sigma_v1, jitter_std[kVx]), axis(motion.sigma_v2, jitter_std[kVy])};
}

models::NoiseScale direct_roughen_scale(const RougheningConfig& config, const models::MotionModel& motion) {
    if (config.mode != Mode::Direct) return {};
    return direct_roughen_scale(config.jitter_std, motion);
}

models::NoiseStd direct_noise_std(const StateVector& jitter_std, const models::MotionModel& motion) {
    auto axis = [](double sigma, double delta) { return delta == 0.0 ? sigma : std::hypot(sigma, delta); };
    return {axis(motion.sigma_v1, jitter_std[kVx]), axis(motion.sigma_v2, jitter_std[kVy])};
}

}  // namespace rphd::roughening
