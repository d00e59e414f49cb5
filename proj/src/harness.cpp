#include "rphd/harness.hpp"

#include "rphd/table_format.hpp"

#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

namespace rphd::harness {

namespace {

constexpr std::uint64_t kScenarioTag = 0x5ce7a210;
constexpr std::uint64_t kFilterTag = 0xf117e400;

double step_ospa(const RunConfig& config, const std::vector<StateVector>& estimates,
                 const std::vector<StateVector>& truth) {
    if (config.ospa_full_state) return metrics::ospa<kStateDim>(estimates, truth, config.ospa);
    return metrics::ospa<2>(metrics::positions(estimates), metrics::positions(truth), config.ospa);
}

}  // namespace

void RunConfig::validate() const {
    models.validate();
    scenario.validate();
    filter.validate();
    ospa.validate();
    if (trials < 1) throw std::invalid_argument("run.trials must be >= 1");
    if (threads < 0) throw std::invalid_argument("run.threads must be >= 0");
    if (variants.empty()) throw std::invalid_argument("at least one roughening variant is required");
    std::set<std::string> names;
    for (const Variant& v : variants) {
        if (v.name.empty()) throw std::invalid_argument("variant names must be non-empty");
        if (!names.insert(v.name).second) throw std::invalid_argument("duplicate variant name '" + v.name + "'");
        v.roughening.validate();
    }
    static_cast<void>(basic_index());
    for (double d : sweep_deltas)
        if (!std::isfinite(d) || d < 0.0) throw std::invalid_argument("sweep deltas must be finite and >= 0");
}

std::size_t RunConfig::basic_index() const {
    for (std::size_t i = 0; i < variants.size(); ++i)
        if (variants[i].roughening.mode == roughening::Mode::None) return i;
    throw std::invalid_argument("a basic (mode=none) variant is required");
}

double RunSummary::mean_ospa_over(std::size_t variant, int first_step, int last_step) const {
    double sum = 0.0;
    long long count = 0;
    for (const TrialResult& t : trials) {
        for (const StepRecord& s : t.steps) {
            if (s.step < first_step || s.step > last_step) continue;
            sum += s.ospa.at(variant);
            ++count;
        }
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index) {
    return derive_seed(master_seed, static_cast<std::uint64_t>(trial_index) + 1);
}

Realization realize(const RunConfig& config, int trial_index) {
    scenario::ScenarioStreams streams(derive_seed(trial_seed(config.master_seed, trial_index), kScenarioTag));
    Realization r;
    r.truth = scenario::generate_truth(config.scenario, config.models, streams.truth);
    r.scans = scenario::generate_scans(r.truth, config.models, streams);
    return r;
}

TrialResult run_trial(const RunConfig& config, int trial_index) {
    TrialResult result;
    result.trial = trial_index;
    result.seed = trial_seed(config.master_seed, trial_index);

    const Realization realization = realize(config, trial_index);
    const scenario::GroundTruth& truth = realization.truth;
    const scenario::ScanData& scans = realization.scans;
    result.scan_hash = scans.hash();

    const std::size_t nv = config.variants.size();
    const auto steps = static_cast<std::size_t>(config.scenario.steps);
    result.steps.resize(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        StepRecord& rec = result.steps[k];
        rec.step = static_cast<int>(k + 1);
        rec.true_n = static_cast<int>(truth.steps[k].size());
        rec.est_n.assign(nv, 0);
        rec.ospa.assign(nv, 0.0);
    }
    result.track_losses.assign(nv, 0);

    const std::uint64_t filter_seed = derive_seed(result.seed, kFilterTag);
    for (std::size_t v = 0; v < nv; ++v) {
        filter::PhdFilter phd(config.models, config.filter, config.variants[v].roughening, filter_seed);
        bool collapsed = false;
        for (std::size_t k = 0; k < steps; ++k) {
            StepRecord& rec = result.steps[k];
            if (!collapsed) {
                const filter::StepOutput out = phd.step(scans.scans[k]);
                if (out.track_loss) {
                    collapsed = true;
                    ++result.track_losses[v];
                } else {
                    rec.est_n[v] = static_cast<int>(out.estimate.cardinality);
                    rec.ospa[v] = step_ospa(config, out.estimate.states, truth.states_at(rec.step));
                }
            }
            if (collapsed) {
                rec.est_n[v] = 0;
                rec.ospa[v] = config.ospa.cutoff;
            }
        }
    }
    if (scans.hash() != result.scan_hash) throw std::logic_error("scan data changed while running variants");
    return result;
}

RunSummary summarize(const RunConfig& config, std::vector<TrialResult> trials) {
    RunSummary summary;
    const std::size_t nv = config.variants.size();
    const auto steps = static_cast<std::size_t>(config.scenario.steps);
    const auto n_trials = static_cast<double>(trials.size());

    summary.variants.resize(nv);
    for (std::size_t v = 0; v < nv; ++v) {
        VariantSummary& vs = summary.variants[v];
        vs.name = config.variants[v].name;
        vs.mode = config.variants[v].roughening.mode;
        vs.mean_true_n.assign(steps, 0.0);
        vs.mean_est_n.assign(steps, 0.0);
        vs.mean_ospa.assign(steps, 0.0);
        double all = 0.0;
        for (std::size_t k = 0; k < steps; ++k) {
            double t_sum = 0.0, e_sum = 0.0, o_sum = 0.0;
            for (const TrialResult& t : trials) {
                t_sum += t.steps[k].true_n;
                e_sum += t.steps[k].est_n[v];
                o_sum += t.steps[k].ospa[v];
            }
            vs.mean_true_n[k] = t_sum / n_trials;
            vs.mean_est_n[k] = e_sum / n_trials;
            vs.mean_ospa[k] = o_sum / n_trials;
            all += o_sum;
        }
        vs.mean_ospa_all = all / (n_trials * static_cast<double>(steps));
        for (const TrialResult& t : trials) vs.track_losses += t.track_losses[v];
    }

    const std::size_t basic = config.basic_index();
    const double reference = summary.variants[basic].mean_ospa_all;
    for (std::size_t v = 0; v < nv; ++v) {
        if (v == basic) continue;
        summary.variants[v].gain_ratio = reference > 0.0
                                             ? metrics::gain_ratio(reference, summary.variants[v].mean_ospa_all)
                                             : std::numeric_limits<double>::quiet_NaN();
    }
    summary.trials = std::move(trials);
    return summary;
}

RunSummary run(const RunConfig& config) {
    config.validate();
    const auto n = static_cast<std::size_t>(config.trials);
    std::vector<TrialResult> trials(n);

    std::size_t workers = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                              : static_cast<std::size_t>(config.threads);
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) trials[i] = run_trial(config, static_cast<int>(i));
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        trials[i] = run_trial(config, static_cast<int>(i));
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }
    return summarize(config, std::move(trials));
}

std::vector<Variant> sweep_variants(const RunConfig& config) {
    roughening::RougheningConfig separate;
    separate.mode = roughening::Mode::Separate;
    roughening::RougheningConfig direct;
    direct.mode = roughening::Mode::Direct;
    bool have_separate = false, have_direct = false;
    for (const Variant& v : config.variants) {
        if (v.roughening.mode == roughening::Mode::Separate && !have_separate) {
            separate = v.roughening;
            have_separate = true;
        } else if (v.roughening.mode == roughening::Mode::Direct && !have_direct) {
            direct = v.roughening;
            have_direct = true;
        }
    }
    separate.gordon.reset();
    direct.gordon.reset();

    std::vector<Variant> out;
    out.push_back(config.variants[config.basic_index()]);
    for (double delta : config.sweep_deltas) {
        const StateVector jitter{0.0, delta, 0.0, delta};
        separate.jitter_std = jitter;
        direct.jitter_std = jitter;
        out.push_back({"separate@" + format_real(delta), separate});
        out.push_back({"direct@" + format_real(delta), direct});
    }
    return out;
}

SweepSummary sweep(const RunConfig& config) {
    config.validate();
    if (config.sweep_deltas.empty()) throw std::invalid_argument("sweep needs at least one delta");
    RunConfig expanded = config;
    expanded.variants = sweep_variants(config);

    SweepSummary out;
    out.run = run(expanded);
    out.basic_mean_ospa = out.run.variants[0].mean_ospa_all;
    for (std::size_t i = 0; i < config.sweep_deltas.size(); ++i) {
        const VariantSummary& s = out.run.variants[1 + 2 * i];
        const VariantSummary& d = out.run.variants[2 + 2 * i];
        out.points.push_back({config.sweep_deltas[i], s.gain_ratio, d.gain_ratio, s.mean_ospa_all, d.mean_ospa_all});
    }
    return out;
}

void write_trials_table(std::ostream& os, const RunConfig& config, const RunSummary& summary) {
    os << "trial\tstep\tvariant\ttrue_n\test_n\tospa\n";
    for (const TrialResult& t : summary.trials)
        for (const StepRecord& s : t.steps)
            for (std::size_t v = 0; v < config.variants.size(); ++v)
                os << t.trial << '\t' << s.step << '\t' << config.variants[v].name << '\t' << s.true_n << '\t'
                   << s.est_n[v] << '\t' << format_real(s.ospa[v]) << '\n';
}

void write_summary_table(std::ostream& os, const RunSummary& summary) {
    os << "variant\tmode\tmean_ospa\tgain_ratio\ttrack_losses\n";
    for (const VariantSummary& v : summary.variants)
        os << v.name << '\t' << roughening::to_string(v.mode) << '\t' << format_real(v.mean_ospa_all) << '\t'
           << format_real(v.gain_ratio) << '\t' << v.track_losses << '\n';
}

void write_per_step_table(std::ostream& os, const RunSummary& summary) {
    os << "variant\tstep\tmean_true_n\tmean_est_n\tmean_ospa\n";
    for (const VariantSummary& v : summary.variants)
        for (std::size_t k = 0; k < v.mean_ospa.size(); ++k)
            os << v.name << '\t' << (k + 1) << '\t' << format_real(v.mean_true_n[k]) << '\t'
               << format_real(v.mean_est_n[k]) << '\t' << format_real(v.mean_ospa[k]) << '\n';
}

void write_sweep_table(std::ostream& os, const SweepSummary& summary) {
    os << "delta\tseparate_mean_ospa\tseparate_gain\tdirect_mean_ospa\tdirect_gain\n";
    for (const SweepPoint& p : summary.points)
        os << format_real(p.delta) << '\t' << format_real(p.separate_mean_ospa) << '\t' << format_real(p.separate_gain)
           << '\t' << format_real(p.direct_mean_ospa) << '\t' << format_real(p.direct_gain) << '\n';
    os << "basic\t" << format_real(summary.basic_mean_ospa) << "\t0\t" << format_real(summary.basic_mean_ospa)
       << "\t0\n";
}

}  // namespace rphd::harness
