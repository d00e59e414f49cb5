#pragma once

#include "rphd/random.hpp"
#include "rphd/types.hpp"

#include <cstddef>
#include <string_view>

namespace rphd::resampling {

enum class Scheme { Systematic, Multinomial };

Scheme parse_scheme(std::string_view name);
std::string_view to_string(Scheme scheme) noexcept;

struct ResampleConfig {
    Scheme scheme = Scheme::Systematic;
    int particles_per_target = 200;
    int min_particles = 100;

    void validate() const;
};

/// Particle budget after resampling: max(round(mass) * N_p, min_particles).
std::size_t target_count(double mass, const ResampleConfig& config);

/// Draws target_count(mass) particles proportional to weight and gives each the
/// weight mass / L_out, so that total_mass() of the output equals the input's
/// exactly. Records ancestry. Throws std::domain_error if the mass is not positive.
ParticleSet resample(const ParticleSet& set, const ResampleConfig& config, Rng& rng);

/// Ancestor indices for `count` systematic draws over `weights`.
std::vector<std::size_t> systematic_indices(std::span<const double> weights, std::size_t count, Rng& rng);
std::vector<std::size_t> multinomial_indices(std::span<const double> weights, std::size_t count, Rng& rng);

}  // namespace rphd::resampling
