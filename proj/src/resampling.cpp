#include "rphd/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rphd::resampling {

Scheme parse_scheme(std::string_view name) {
    if (name == "systematic") return Scheme::Systematic;
    if (name == "multinomial") return Scheme::Multinomial;
    throw std::invalid_argument("unknown resampling scheme '" + std::string(name) + "'");
}

std::string_view to_string(Scheme scheme) noexcept {
    return scheme == Scheme::Systematic ? "systematic" : "multinomial";
}

void ResampleConfig::validate() const {
    if (particles_per_target < 1) throw std::invalid_argument("particles_per_target must be >= 1");
    if (min_particles < 1) throw std::invalid_argument("min_particles must be >= 1");
}

std::size_t target_count(double mass, const ResampleConfig& config) {
    if (!(mass >= 0.0) || !std::isfinite(mass)) throw std::invalid_argument("target_count: mass must be finite and >= 0");
    const auto targets = static_cast<std::size_t>(round_half_up(mass));
    const std::size_t budget = targets * static_cast<std::size_t>(config.particles_per_target);
    return std::max(budget, static_cast<std::size_t>(config.min_particles));
}

std::vector<std::size_t> systematic_indices(std::span<const double> weights, std::size_t count, Rng& rng) {
    std::vector<std::size_t> out;
    out.reserve(count);
    if (weights.empty() || count == 0) return out;

    const double total = compensated_sum(weights);
    // Cumulative weight in units of "draws", kept in extended precision so that
    // each particle receives floor or ceil of count * w_i / total copies.
    const long double scale = static_cast<long double>(count) / static_cast<long double>(total);
    const long double offset = static_cast<long double>(rng.uniform());
    long double cumulative = 0.0L;
    std::size_t next = 0;
    for (std::size_t i = 0; i < weights.size() && next < count; ++i) {
        cumulative += static_cast<long double>(weights[i]) * scale;
        const bool last = i + 1 == weights.size();
        while (next < count && (last || offset + static_cast<long double>(next) < cumulative)) {
            out.push_back(i);
            ++next;
        }
    }
    return out;
}

std::vector<std::size_t> multinomial_indices(std::span<const double> weights, std::size_t count, Rng& rng) {
    std::vector<std::size_t> out;
    out.reserve(count);
    if (weights.empty() || count == 0) return out;

    std::vector<double> cumulative(weights.size());
    double running = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        running += weights[i];
        cumulative[i] = running;
    }
    for (std::size_t n = 0; n < count; ++n) {
        const double u = rng.uniform() * running;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        auto idx = static_cast<std::size_t>(it - cumulative.begin());
        idx = std::min(idx, weights.size() - 1);
        // skip zero-weight entries that share a cumulative value with their successor
        while (weights[idx] == 0.0 && idx + 1 < weights.size()) ++idx;
        out.push_back(idx);
    }
    return out;
}

ParticleSet resample(const ParticleSet& set, const ResampleConfig& config, Rng& rng) {
    const double mass = total_mass(set);
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw std::domain_error("resample: total mass must be positive and finite");

    std::vector<double> weights(set.size());
    std::transform(set.particles.begin(), set.particles.end(), weights.begin(),
                   [](const Particle& p) { return p.weight; });

    const std::size_t count = target_count(mass, config);
    auto ancestry = config.scheme == Scheme::Systematic ? systematic_indices(weights, count, rng)
                                                        : multinomial_indices(weights, count, rng);

    ParticleSet out;
    out.step = set.step;
    out.particles.reserve(count);
    const double w = mass / static_cast<double>(count);
    for (std::size_t idx : ancestry) out.particles.push_back({set.particles[idx].state, w});
    settle_mass(out.particles, mass);
    out.survivor_count = out.particles.size();
    out.ancestry = std::move(ancestry);
    return out;
}

}  // namespace rphd::resampling
