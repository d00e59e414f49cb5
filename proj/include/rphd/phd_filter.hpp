#pragma once

#include "rphd/models.hpp"
#include "rphd/random.hpp"
#include "rphd/resampling.hpp"
#include "rphd/roughening.hpp"
#include "rphd/types.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace rphd::filter {

/// Importance density for survivors, q(x | u, Z). Absent means bootstrap (q = f).
struct SurvivorProposal {
    std::function<StateVector(const StateVector& parent, Rng& rng)> sample;
    std::function<double(const StateVector& x, const StateVector& parent)> density;
};

/// Importance density for births, p(x | Z). Absent means the normalized birth density.
struct BirthProposal {
    std::function<StateVector(Rng& rng)> sample;
    std::function<double(const StateVector& x)> density;
};

struct FilterConfig {
    /// N_p, particles per expected target.
    int particles_per_target = 200;
    /// J_k; 0 selects round(birth mass * N_p).
    int birth_particles = 0;
    /// Resampling floor; 0 selects ceil(N_p / 2).
    int min_particles = 0;
    resampling::Scheme scheme = resampling::Scheme::Systematic;
    std::optional<SurvivorProposal> proposal;
    std::optional<BirthProposal> birth_proposal;

    void validate() const;
    [[nodiscard]] std::size_t resolved_birth_particles(double birth_mass) const;
    [[nodiscard]] int resolved_min_particles() const;
    [[nodiscard]] resampling::ResampleConfig resample_config() const;
};

struct Estimate {
    std::size_t cardinality = 0;
    std::vector<StateVector> states;
};

/// Per-measurement quantities of one update.
struct UpdateTerms {
    std::vector<double> clutter;  ///< kappa(z)
    std::vector<double> C;        ///< sum_j p_D g(z|x_j) w_j
    /// C / (kappa + C), or 0 when the denominator vanishes
    std::vector<double> contribution;
    double prior_mass = 0.0;
};

/// Prediction step. Survivors move through the proposal and are reweighted;
/// under the bootstrap proposal without spawning this is w <- p_S * w with the
/// survivor mass settled to exactly p_S * (input mass). Birth particles are
/// appended with total mass exactly equal to the birth mass under the default
/// birth proposal. Direct roughening, when configured, inflates the bootstrap
/// propagation noise of the particles selected by roughening_mask().
ParticleSet predict(const ParticleSet& prev, const models::ModelSet& models, const FilterConfig& config,
                    const roughening::RougheningConfig& roughening, Rng& propagation, Rng& birth);

/// Corrector step. States are untouched; only weights change.
ParticleSet update(const ParticleSet& pred, std::span<const Measurement> measurements,
                   const models::ModelSet& models, UpdateTerms* terms = nullptr);

/// round(sum of weights), half-up.
std::size_t estimate_cardinality(const ParticleSet& set);

/// Weighted k-means over standardized states with k = n and k-means++ seeding.
/// Particles are sorted lexicographically before seeding, so the result does
/// not depend on the input order for a given `rng` state.
Estimate extract_states(const ParticleSet& set, std::size_t n, Rng& rng);

struct StepOutput {
    Estimate estimate;
    double mass = 0.0;
    std::size_t predicted_particles = 0;
    std::size_t resampled_particles = 0;
    /// Posterior mass was zero; resampling and roughening were skipped.
    bool track_loss = false;
};

/// One filter instance: predict, update, extract, resample, roughen.
class PhdFilter {
public:
    PhdFilter(models::ModelSet models, FilterConfig config, roughening::RougheningConfig roughening,
              std::uint64_t stream_seed);

    StepOutput step(std::span<const Measurement> measurements);

    [[nodiscard]] const ParticleSet& particles() const noexcept { return set_; }
    [[nodiscard]] const models::ModelSet& models() const noexcept { return models_; }
    [[nodiscard]] const FilterConfig& config() const noexcept { return config_; }
    [[nodiscard]] const roughening::RougheningConfig& roughening() const noexcept { return roughening_; }

private:
    models::ModelSet models_;
    FilterConfig config_;
    roughening::RougheningConfig roughening_;
    FilterStreams streams_;
    ParticleSet set_;
};

}  // namespace rphd::filter
