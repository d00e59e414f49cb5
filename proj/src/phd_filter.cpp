#include "rphd/phd_filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rphd::filter {

namespace {

constexpr double kUnderflow = 1e-300;

void require_finite_weights(const ParticleSet& set, const char* where) {
    for (const Particle& p : set.particles)
        if (!std::isfinite(p.weight) || p.weight < 0.0)
            throw std::invalid_argument(std::string(where) + ": particle weights must be finite and non-negative");
}

}  // namespace

void FilterConfig::validate() const {
    if (particles_per_target < 1) throw std::invalid_argument("filter.particles_per_target must be >= 1");
    if (birth_particles < 0) throw std::invalid_argument("filter.birth_particles must be >= 0");
    if (min_particles < 0) throw std::invalid_argument("filter.min_particles must be >= 0");
    if (proposal && (!proposal->sample || !proposal->density))
        throw std::invalid_argument("filter proposal needs both sample and density");
    if (birth_proposal && (!birth_proposal->sample || !birth_proposal->density))
        throw std::invalid_argument("filter birth proposal needs both sample and density");
}

std::size_t FilterConfig::resolved_birth_particles(double birth_mass) const {
    if (birth_particles > 0) return static_cast<std::size_t>(birth_particles);
    if (!(birth_mass > 0.0)) return 0;
    const long long j = round_half_up(birth_mass * particles_per_target);
    return static_cast<std::size_t>(std::max<long long>(j, 1));
}

int FilterConfig::resolved_min_particles() const {
    if (min_particles > 0) return min_particles;
    return (particles_per_target + 1) / 2;
}

resampling::ResampleConfig FilterConfig::resample_config() const {
    return {scheme, particles_per_target, resolved_min_particles()};
}

ParticleSet predict(const ParticleSet& prev, const models::ModelSet& models, const FilterConfig& config,
                    const roughening::RougheningConfig& rough, Rng& propagation, Rng& birth_rng) {
    require_finite_weights(prev, "predict");
    const auto& motion = models.motion;
    const double p_s = models.detection.p_survive;

    ParticleSet out;
    out.step = prev.step + 1;
    out.particles.reserve(prev.size() + config.resolved_birth_particles(models.birth.mass));

    const bool direct = rough.mode == roughening::Mode::Direct && !rough.is_inert() && !config.proposal;
    const models::NoiseStd base{motion.sigma_v1, motion.sigma_v2};
    models::NoiseStd inflated = base;
    std::vector<bool> mask;
    if (direct) {
        inflated = roughening::direct_noise_std(
            roughening::effective_jitter_std(rough, prev, motion, models.measurement), motion);
        mask = roughening::roughening_mask(rough, prev);
    }

    const bool bootstrap = !config.proposal;
    const auto& spawn = models.birth.spawn;
    for (std::size_t i = 0; i < prev.size(); ++i) {
        const Particle& parent = prev.particles[i];
        Particle child;
        if (bootstrap) {
            const models::NoiseStd std = direct && mask[i] ? inflated : base;
            child.state = models::propagate_with_std(parent.state, motion.T, std, propagation);
            double factor = p_s;
            if (spawn) {
                const double f = models::transition_density(child.state, parent.state, motion);
                if (f > 0.0) factor += (*spawn)(child.state, parent.state) / f;
            }
            child.weight = factor * parent.weight;
        } else {
            child.state = config.proposal->sample(parent.state, propagation);
            const double q = config.proposal->density(child.state, parent.state);
            double phi = p_s * models::transition_density(child.state, parent.state, motion);
            if (spawn) phi += (*spawn)(child.state, parent.state);
            child.weight = q > 0.0 ? phi * parent.weight / q : 0.0;
        }
        out.particles.push_back(child);
    }
    if (bootstrap && !spawn)
        settle_mass(std::span(out.particles), p_s * total_mass(prev));
    out.survivor_count = out.particles.size();

    const double mass = models.birth.mass;
    const std::size_t births = mass > 0.0 ? config.resolved_birth_particles(mass) : 0;
    if (births > 0) {
        const double J = static_cast<double>(births);
        for (std::size_t j = 0; j < births; ++j) {
            Particle p;
            if (config.birth_proposal) {
                p.state = config.birth_proposal->sample(birth_rng);
                const double density = config.birth_proposal->density(p.state);
                p.weight = density > 0.0 ? models::birth_intensity(p.state, models.birth) / (J * density) : 0.0;
            } else {
                p.state = models::birth_sample(models.birth, birth_rng);
                p.weight = mass / J;
            }
            out.particles.push_back(p);
        }
        if (!config.birth_proposal)
            settle_mass(std::span(out.particles).subspan(out.survivor_count), mass);
    }
    return out;
}

ParticleSet update(const ParticleSet& pred, std::span<const Measurement> measurements,
                   const models::ModelSet& models, UpdateTerms* terms) {
    require_finite_weights(pred, "update");
    const double p_d = models.detection.p_detect;
    const std::size_t L = pred.size();
    const std::size_t M = measurements.size();

    ParticleSet out = pred;
    out.ancestry.clear();

    UpdateTerms local;
    UpdateTerms& t = terms ? *terms : local;
    t.clutter.assign(M, 0.0);
    t.C.assign(M, 0.0);
    t.contribution.assign(M, 0.0);
    t.prior_mass = total_mass(pred);
    for (std::size_t m = 0; m < M; ++m) t.clutter[m] = models::clutter_intensity(measurements[m], models.clutter);

    if (p_d == 0.0 || M == 0) {
        for (Particle& p : out.particles) {
            p.weight *= 1.0 - p_d;
            if (p.weight < kUnderflow) p.weight = 0.0;
        }
        return out;
    }

    // detection-weighted likelihoods p_D g(z_m | x_i), row-major by particle
    std::vector<double> g(L * M);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t m = 0; m < M; ++m)
            g[i * M + m] = p_d * models::likelihood(measurements[m], pred.particles[i].state, models.measurement);

    std::vector<double> column(L);
    std::vector<double> inv_denom(M, 0.0);
    for (std::size_t m = 0; m < M; ++m) {
        for (std::size_t i = 0; i < L; ++i) column[i] = g[i * M + m] * pred.particles[i].weight;
        t.C[m] = compensated_sum(column);
        const double denom = t.clutter[m] + t.C[m];
        if (denom > 0.0) {
            inv_denom[m] = 1.0 / denom;
            t.contribution[m] = t.C[m] / denom;
        }
    }

    for (std::size_t i = 0; i < L; ++i) {
        double factor = 1.0 - p_d;
        for (std::size_t m = 0; m < M; ++m) factor += g[i * M + m] * inv_denom[m];
        double w = factor * pred.particles[i].weight;
        if (w < kUnderflow) w = 0.0;
        out.particles[i].weight = w;
    }
    return out;
}

std::size_t estimate_cardinality(const ParticleSet& set) {
    const double mass = total_mass(set);
    if (!(mass > 0.0)) return 0;
    return static_cast<std::size_t>(round_half_up(mass));
}

Estimate extract_states(const ParticleSet& set, std::size_t n, Rng& rng) {
    Estimate est;
    if (n == 0 || set.empty()) return est;

    std::vector<std::size_t> order(set.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Particle& pa = set.particles[a];
        const Particle& pb = set.particles[b];
        if (pa.state != pb.state) return pa.state < pb.state;
        return pa.weight < pb.weight;
    });
    const std::size_t L = order.size();
    std::vector<StateVector> pts(L);
    std::vector<double> w(L);
    for (std::size_t i = 0; i < L; ++i) {
        pts[i] = set.particles[order[i]].state;
        w[i] = set.particles[order[i]].weight;
    }
    double wsum = compensated_sum(w);
    if (!(wsum > 0.0)) {
        std::fill(w.begin(), w.end(), 1.0);
        wsum = static_cast<double>(L);
    }

    // per-dimension weighted standardization
    StateVector mean{}, scale{};
    for (std::size_t d = 0; d < kStateDim; ++d) {
        double m = 0.0;
        for (std::size_t i = 0; i < L; ++i) m += w[i] * pts[i][d];
        m /= wsum;
        double v = 0.0;
        for (std::size_t i = 0; i < L; ++i) v += w[i] * (pts[i][d] - m) * (pts[i][d] - m);
        v /= wsum;
        mean[d] = m;
        scale[d] = v > 0.0 ? std::sqrt(v) : 1.0;
    }
    std::vector<StateVector> z(L);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t d = 0; d < kStateDim; ++d) z[i][d] = (pts[i][d] - mean[d]) / scale[d];

    auto dist2 = [](const StateVector& a, const StateVector& b) {
        double s = 0.0;
        for (std::size_t d = 0; d < kStateDim; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
        return s;
    };
    auto pick = [&](const std::vector<double>& mass) {
        const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
        const double u = rng.uniform() * total;
        double run = 0.0;
        for (std::size_t i = 0; i < mass.size(); ++i) {
            run += mass[i];
            if (u < run && mass[i] > 0.0) return i;
        }
        for (std::size_t i = mass.size(); i-- > 0;)
            if (mass[i] > 0.0) return i;
        return std::size_t{0};
    };

    // k-means++ seeding
    const std::size_t k = n;
    std::vector<StateVector> centers;
    centers.reserve(k);
    centers.push_back(z[pick(w)]);
    std::vector<double> nearest(L);
    for (std::size_t i = 0; i < L; ++i) nearest[i] = dist2(z[i], centers[0]);
    std::vector<double> seed_mass(L);
    while (centers.size() < k) {
        for (std::size_t i = 0; i < L; ++i) seed_mass[i] = w[i] * nearest[i];
        const bool spread = std::any_of(seed_mass.begin(), seed_mass.end(), [](double v) { return v > 0.0; });
        const std::size_t chosen = pick(spread ? seed_mass : w);
        centers.push_back(z[chosen]);
        for (std::size_t i = 0; i < L; ++i) nearest[i] = std::min(nearest[i], dist2(z[i], centers.back()));
    }

    // Lloyd iterations
    std::vector<std::size_t> label(L, 0);
    constexpr int kMaxIterations = 100;
    constexpr double kTolerance = 1e-6;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        for (std::size_t i = 0; i < L; ++i) {
            std::size_t best = 0;
            double best_d = dist2(z[i], centers[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double d = dist2(z[i], centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            label[i] = best;
        }
        std::vector<StateVector> sums(k, StateVector{});
        std::vector<double> mass(k, 0.0);
        for (std::size_t i = 0; i < L; ++i) {
            mass[label[i]] += w[i];
            for (std::size_t d = 0; d < kStateDim; ++d) sums[label[i]][d] += w[i] * z[i][d];
        }
        double movement = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            if (!(mass[c] > 0.0)) continue;
            StateVector next{};
            for (std::size_t d = 0; d < kStateDim; ++d) next[d] = sums[c][d] / mass[c];
            const double norm = std::sqrt(dist2(centers[c], StateVector{}));
            movement = std::max(movement, std::sqrt(dist2(next, centers[c])) / std::max(norm, 1.0));
            centers[c] = next;
        }
        if (movement < kTolerance) break;
    }

    // Final centroids in original units, anchored on a member so identical
    // members reproduce their state exactly.
    std::vector<StateVector> anchor(k);
    std::vector<bool> has_anchor(k, false);
    std::vector<StateVector> offset(k, StateVector{});
    std::vector<double> mass(k, 0.0);
    for (std::size_t i = 0; i < L; ++i) {
        const std::size_t c = label[i];
        if (!(w[i] > 0.0)) continue;
        if (!has_anchor[c]) {
            anchor[c] = pts[i];
            has_anchor[c] = true;
        }
        mass[c] += w[i];
        for (std::size_t d = 0; d < kStateDim; ++d) offset[c][d] += w[i] * (pts[i][d] - anchor[c][d]);
    }
    est.states.reserve(k);
    for (std::size_t c = 0; c < k; ++c) {
        StateVector s{};
        if (has_anchor[c]) {
            for (std::size_t d = 0; d < kStateDim; ++d) s[d] = anchor[c][d] + offset[c][d] / mass[c];
        } else {
            for (std::size_t d = 0; d < kStateDim; ++d) s[d] = centers[c][d] * scale[d] + mean[d];
        }
        est.states.push_back(s);
    }
    est.cardinality = est.states.size();
    return est;
}

PhdFilter::PhdFilter(models::ModelSet models, FilterConfig config, roughening::RougheningConfig roughening,
                     std::uint64_t stream_seed)
    : models_(std::move(models)),
      config_(std::move(config)),
      roughening_(std::move(roughening)),
      streams_(stream_seed) {
    models_.validate();
    config_.validate();
    roughening_.validate();
}

StepOutput PhdFilter::step(std::span<const Measurement> measurements) {
    StepOutput out;
    ParticleSet predicted = predict(set_, models_, config_, roughening_, streams_.propagation, streams_.birth);
    out.predicted_particles = predicted.size();
    ParticleSet posterior = update(predicted, measurements, models_);
    out.mass = total_mass(posterior);
    out.estimate = extract_states(posterior, estimate_cardinality(posterior), streams_.extraction);

    if (!(out.mass > 0.0) || !std::isfinite(out.mass)) {
        out.track_loss = true;
        set_ = ParticleSet{};
        set_.step = posterior.step;
        return out;
    }
    ParticleSet resampled = resampling::resample(posterior, config_.resample_config(), streams_.resampling);
    if (roughening_.mode == roughening::Mode::Separate && !roughening_.is_inert())
        resampled = roughening::separate_roughen(std::move(resampled), roughening_, models_.motion,
                                                 models_.measurement, streams_.jitter);
    out.resampled_particles = resampled.size();
    set_ = std::move(resampled);
    return out;
}

}  // namespace rphd::filter
