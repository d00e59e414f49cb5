#pragma once

#include "rphd/metrics.hpp"
#include "rphd/models.hpp"
#include "rphd/phd_filter.hpp"
#include "rphd/roughening.hpp"
#include "rphd/scenario.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace rphd::harness {

/// One filter arm of a Monte Carlo comparison.
struct Variant {
    std::string name;
    roughening::RougheningConfig roughening;
};

struct RunConfig {
    models::ModelSet models{};
    scenario::ScenarioConfig scenario = scenario::four_target_preset();
    filter::FilterConfig filter{};
    std::vector<Variant> variants;
    int trials = 100;
    std::uint64_t master_seed = 1;
    metrics::OspaParams ospa{};
    /// OSPA over the full state instead of (px, py).
    bool ospa_full_state = false;
    /// Jitter stds for sweep(); applied to both velocity components.
    std::vector<double> sweep_deltas{0.0, 0.1, 0.2, 0.4, 0.8, 1.6, 2.5};
    /// Worker threads for trials; 0 means hardware concurrency.
    int threads = 1;

    void validate() const;
    /// Index of the first mode=none variant, the gain-ratio reference.
    [[nodiscard]] std::size_t basic_index() const;
};

struct StepRecord {
    int step = 0;
    int true_n = 0;
    std::vector<int> est_n;       ///< per variant
    std::vector<double> ospa;     ///< per variant
};

struct TrialResult {
    int trial = 0;
    std::uint64_t seed = 0;
    std::uint64_t scan_hash = 0;
    std::vector<StepRecord> steps;
    std::vector<int> track_losses;  ///< per variant
};

struct VariantSummary {
    std::string name;
    roughening::Mode mode = roughening::Mode::None;
    std::vector<double> mean_true_n;  ///< per step
    std::vector<double> mean_est_n;   ///< per step
    std::vector<double> mean_ospa;    ///< per step
    double mean_ospa_all = 0.0;       ///< over all steps and trials
    double gain_ratio = 0.0;          ///< versus the basic arm; 0 for the basic arm itself
    long long track_losses = 0;
};

struct RunSummary {
    std::vector<VariantSummary> variants;
    std::vector<TrialResult> trials;

    /// Mean over trials and steps [first_step, last_step] of one variant's OSPA.
    [[nodiscard]] double mean_ospa_over(std::size_t variant, int first_step, int last_step) const;
};

/// Trial seed derived from (master_seed, trial_index) only.
std::uint64_t trial_seed(std::uint64_t master_seed, int trial_index);

struct Realization {
    scenario::GroundTruth truth;
    scenario::ScanData scans;
};

/// Ground truth and scans of one trial; depends only on (master_seed, trial_index).
Realization realize(const RunConfig& config, int trial_index);

/// One realization, every variant run on it. All variants share the same
/// filter stream seed, so variants with equal configurations produce equal
/// columns and a zero-strength roughening arm reproduces the basic arm.
TrialResult run_trial(const RunConfig& config, int trial_index);

RunSummary summarize(const RunConfig& config, std::vector<TrialResult> trials);
RunSummary run(const RunConfig& config);

struct SweepPoint {
    double delta = 0.0;
    double separate_gain = 0.0;
    double direct_gain = 0.0;
    double separate_mean_ospa = 0.0;
    double direct_mean_ospa = 0.0;
};

struct SweepSummary {
    double basic_mean_ospa = 0.0;
    std::vector<SweepPoint> points;
    RunSummary run;
};

/// Gain ratio of both roughening modes for every jitter std in sweep_deltas.
/// All arms share one set of realizations with a single basic reference arm.
/// Other roughening knobs are taken from the first separate/direct variant in
/// the config when present.
SweepSummary sweep(const RunConfig& config);

/// Variant list of a sweep: basic, then separate@delta and direct@delta per grid point.
std::vector<Variant> sweep_variants(const RunConfig& config);

/// Long table: `trial step variant true_n est_n ospa`.
void write_trials_table(std::ostream& os, const RunConfig& config, const RunSummary& summary);
/// `variant mode mean_ospa gain_ratio track_losses`.
void write_summary_table(std::ostream& os, const RunSummary& summary);
/// `variant step mean_true_n mean_est_n mean_ospa`.
void write_per_step_table(std::ostream& os, const RunSummary& summary);
/// `delta separate_mean_ospa separate_gain direct_mean_ospa direct_gain` plus a basic row.
void write_sweep_table(std::ostream& os, const SweepSummary& summary);

}  // namespace rphd::harness
