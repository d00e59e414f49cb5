#include "rphd/selftest.hpp"

#include "rphd/harness.hpp"
#include "rphd/metrics.hpp"
#include "rphd/phd_filter.hpp"
#include "rphd/resampling.hpp"
#include "rphd/table_format.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace rphd::selftest {

namespace {

using metrics::Position;

std::vector<Position> random_points(Rng& rng, std::size_t count) {
    std::vector<Position> out(count);
    for (auto& p : out) p = {rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0)};
    return out;
}

ParticleSet random_set(Rng& rng, std::size_t count) {
    ParticleSet set;
    set.particles.resize(count);
    for (auto& p : set.particles) {
        p.state = {rng.uniform(-100.0, 100.0), rng.normal(0.0, 3.0), rng.uniform(-100.0, 100.0), rng.normal(0.0, 3.0)};
        p.weight = rng.uniform() * 0.01;
    }
    set.survivor_count = count;
    return set;
}

CheckResult check_ospa_oracle(Rng& rng) {
    const metrics::OspaParams params{};
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const auto X = random_points(rng, rng.index(7));
        const auto Y = random_points(rng, rng.index(7));
        worst = std::max(worst, std::fabs(metrics::ospa<2>(X, Y, params) - metrics::ospa_bruteforce<2>(X, Y, params)));
    }
    return {"ospa matches enumeration", worst < 1e-9, "max abs diff " + format_real(worst)};
}

CheckResult check_ospa_axioms(Rng& rng) {
    const metrics::OspaParams params{};
    bool ok = true;
    for (int i = 0; i < 1000 && ok; ++i) {
        const auto X = random_points(rng, rng.index(6));
        const auto Y = random_points(rng, rng.index(6));
        const auto Z = random_points(rng, rng.index(6));
        const double xy = metrics::ospa<2>(X, Y, params);
        ok = xy == metrics::ospa<2>(Y, X, params) && metrics::ospa<2>(X, X, params) == 0.0 &&
             xy <= metrics::ospa<2>(X, Z, params) + metrics::ospa<2>(Z, Y, params) + 1e-9 && xy >= 0.0 &&
             xy <= params.cutoff;
    }
    return {"ospa metric axioms", ok, ok ? "" : "axiom violated"};
}

CheckResult check_update_mass(Rng& rng) {
    models::ModelSet models;
    double worst = 0.0;
    bool bounded = true;
    for (int i = 0; i < 200; ++i) {
        const ParticleSet pred = random_set(rng, 1 + rng.index(300));
        std::vector<Measurement> Z(rng.index(15));
        for (auto& z : Z) z = {rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0)};
        filter::UpdateTerms terms;
        const ParticleSet post = filter::update(pred, Z, models, &terms);
        double expected = (1.0 - models.detection.p_detect) * terms.prior_mass;
        for (double c : terms.contribution) {
            bounded = bounded && c >= 0.0 && c <= 1.0;
            expected += c;
        }
        const double got = total_mass(post);
        worst = std::max(worst, std::fabs(got - expected) / std::max(expected, 1e-300));
    }
    return {"update mass identity", worst < 1e-10 && bounded, "max rel err " + format_real(worst)};
}

CheckResult check_predict_mass(Rng& rng) {
    models::ModelSet models;
    filter::FilterConfig config;
    bool ok = true;
    for (int i = 0; i < 100 && ok; ++i) {
        const ParticleSet prev = random_set(rng, rng.index(500));
        Rng prop(rng.engine()());
        Rng birth(rng.engine()());
        const ParticleSet pred = filter::predict(prev, models, config, {}, prop, birth);
        const auto survivors = std::span(pred.particles).first(pred.survivor_count);
        const auto births = std::span(pred.particles).subspan(pred.survivor_count);
        ok = total_mass(survivors) == models.detection.p_survive * total_mass(prev) &&
             total_mass(births) == models.birth.mass;
    }
    return {"predict mass identity", ok, ok ? "" : "mass mismatch"};
}

CheckResult check_resampling(Rng& rng) {
    resampling::ResampleConfig config{resampling::Scheme::Systematic, 50, 25};
    bool ok = true;
    for (int i = 0; i < 200 && ok; ++i) {
        const ParticleSet set = random_set(rng, 1 + rng.index(400));
        const double mass = total_mass(set);
        const ParticleSet out = resampling::resample(set, config, rng);
        std::vector<std::size_t> copies(set.size(), 0);
        for (std::size_t a : out.ancestry) ++copies[a];
        for (std::size_t j = 0; j < set.size() && ok; ++j) {
            const double expect = static_cast<double>(out.size()) * set.particles[j].weight / mass;
            const auto c = static_cast<double>(copies[j]);
            ok = c >= std::floor(expect - 1e-9) && c <= std::ceil(expect + 1e-9);
        }
        ok = ok && total_mass(out) == mass && std::is_sorted(out.ancestry.begin(), out.ancestry.end());
    }
    return {"systematic resampling bounds and exact mass", ok, ok ? "" : "violation"};
}

CheckResult check_zero_roughening(std::uint64_t seed) {
    harness::RunConfig config;
    config.trials = 2;
    config.master_seed = seed;
    config.scenario.steps = 12;
    config.scenario.targets = {{1, 12, std::nullopt}, {3, 9, std::nullopt}};
    config.filter.particles_per_target = 60;
    roughening::RougheningConfig separate;
    separate.mode = roughening::Mode::Separate;
    separate.jitter_std = {};
    roughening::RougheningConfig direct = separate;
    direct.mode = roughening::Mode::Direct;
    config.variants = {{"basic", {}}, {"separate0", separate}, {"direct0", direct}};
    const auto summary = harness::run(config);
    bool ok = true;
    for (const auto& t : summary.trials)
        for (const auto& s : t.steps)
            ok = ok && s.ospa[0] == s.ospa[1] && s.ospa[0] == s.ospa[2] && s.est_n[0] == s.est_n[1] &&
                 s.est_n[0] == s.est_n[2];
    return {"zero roughening reproduces basic filter", ok, ok ? "" : "columns differ"};
}

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        return {name, false, std::string("exception: ") + e.what()};
    }
}

}  // namespace

std::vector<CheckResult> run_all(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<CheckResult> out;
    out.push_back(guarded("ospa matches enumeration", [&] { return check_ospa_oracle(rng); }));
    out.push_back(guarded("ospa metric axioms", [&] { return check_ospa_axioms(rng); }));
    out.push_back(guarded("update mass identity", [&] { return check_update_mass(rng); }));
    out.push_back(guarded("predict mass identity", [&] { return check_predict_mass(rng); }));
    out.push_back(guarded("systematic resampling bounds and exact mass", [&] { return check_resampling(rng); }));
    out.push_back(guarded("zero roughening reproduces basic filter", [&] { return check_zero_roughening(seed); }));
    return out;
}

}  // namespace rphd::selftest
