// rphd - Monte Carlo driver for the roughened particle PHD filter.
//
// Talks to the library exclusively through the C interface in rphd.h.

#include "rphd/rphd.h"

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

struct ConfigDeleter {
    void operator()(rphd_config* c) const { rphd_config_free(c); }
};
struct SummaryDeleter {
    void operator()(rphd_summary* s) const { rphd_summary_free(s); }
};
struct SweepDeleter {
    void operator()(rphd_sweep* s) const { rphd_sweep_free(s); }
};

using ConfigPtr = std::unique_ptr<rphd_config, ConfigDeleter>;

/// Exit codes: 0 success, 1 runtime failure, 2 invalid configuration or usage.
int exit_code(rphd_status status) {
    switch (status) {
        case RPHD_OK: return 0;
        case RPHD_ERR_CONFIG:
        case RPHD_ERR_INVALID_ARGUMENT: return 2;
        default: return 1;
    }
}

int report(rphd_status status, const char* what) {
    std::fprintf(stderr, "rphd: %s: %s (%s)\n", what, rphd_last_error(), rphd_status_string(status));
    return exit_code(status);
}

struct CommonOptions {
    std::string config_path;
    std::string preset;
    std::optional<unsigned long long> seed;
    std::optional<int> trials;
    std::optional<int> threads;
    std::vector<std::string> settings;
    std::string out_dir = "results";
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_out = true) {
    cmd->add_option("--config", o.config_path, "Configuration file (key = value lines)")->check(CLI::ExistingFile);
    cmd->add_option("--preset", o.preset, "Base preset: paper-np200 or paper-np1000")
        ->check(CLI::IsMember({"paper-np200", "paper-np1000"}));
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--trials", o.trials, "Number of Monte Carlo trials");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    cmd->add_option("--set", o.settings, "Override a config key, e.g. --set filter.particles_per_target=500");
    if (with_out) cmd->add_option("--out", o.out_dir, "Output directory");
}

/// Builds the config: preset (or file), then flag overrides.
int build_config(const CommonOptions& o, ConfigPtr& out) {
    rphd_config* raw = nullptr;
    rphd_status st = RPHD_OK;
    if (!o.config_path.empty())
        st = rphd_config_load(o.config_path.c_str(), &raw);
    else
        st = rphd_config_preset(o.preset.empty() ? "paper-np200" : o.preset.c_str(), &raw);
    if (st != RPHD_OK) return report(st, "loading configuration");
    out.reset(raw);

    if (!o.config_path.empty() && !o.preset.empty()) {
        std::fprintf(stderr, "rphd: --preset and --config are mutually exclusive; use 'preset = ...' in the file\n");
        return 2;
    }
    auto set = [&](const std::string& key, const std::string& value) {
        const rphd_status s = rphd_config_set(out.get(), key.c_str(), value.c_str());
        return s == RPHD_OK ? 0 : report(s, ("setting " + key).c_str());
    };
    for (const std::string& kv : o.settings) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "rphd: --set expects key=value, got '%s'\n", kv.c_str());
            return 2;
        }
        if (int rc = set(kv.substr(0, eq), kv.substr(eq + 1))) return rc;
    }
    if (o.seed)
        if (int rc = set("run.master_seed", std::to_string(*o.seed))) return rc;
    if (o.trials)
        if (int rc = set("run.trials", std::to_string(*o.trials))) return rc;
    if (o.threads)
        if (int rc = set("run.threads", std::to_string(*o.threads))) return rc;

    if (rphd_status s = rphd_config_validate(out.get()); s != RPHD_OK) return report(s, "invalid configuration");
    return 0;
}

int cmd_run(const CommonOptions& o) {
    ConfigPtr config;
    if (int rc = build_config(o, config)) return rc;
    rphd_summary* raw = nullptr;
    if (rphd_status s = rphd_run(config.get(), &raw); s != RPHD_OK) return report(s, "run");
    std::unique_ptr<rphd_summary, SummaryDeleter> summary(raw);
    if (rphd_status s = rphd_summary_write(summary.get(), config.get(), o.out_dir.c_str()); s != RPHD_OK)
        return report(s, "writing results");

    std::printf("%-16s %12s %12s\n", "variant", "mean_ospa", "gain_ratio");
    for (size_t v = 0; v < rphd_summary_variant_count(summary.get()); ++v) {
        double ospa = 0.0, gain = 0.0;
        rphd_summary_mean_ospa(summary.get(), v, &ospa);
        rphd_summary_gain_ratio(summary.get(), v, &gain);
        std::printf("%-16s %12.6g %12.6g\n", rphd_summary_variant_name(summary.get(), v), ospa, gain);
    }
    std::printf("tables written to %s\n", o.out_dir.c_str());
    return 0;
}

int cmd_sweep(const CommonOptions& o, const std::string& deltas) {
    ConfigPtr config;
    if (int rc = build_config(o, config)) return rc;
    if (!deltas.empty()) {
        if (rphd_status s = rphd_config_set(config.get(), "sweep.deltas", deltas.c_str()); s != RPHD_OK)
            return report(s, "setting sweep.deltas");
    }
    rphd_sweep* raw = nullptr;
    if (rphd_status s = rphd_sweep_run(config.get(), &raw); s != RPHD_OK) return report(s, "sweep");
    std::unique_ptr<rphd_sweep, SweepDeleter> sweep(raw);
    if (rphd_status s = rphd_sweep_write(sweep.get(), o.out_dir.c_str()); s != RPHD_OK)
        return report(s, "writing results");

    std::printf("%10s %14s %14s\n", "delta", "separate_gain", "direct_gain");
    for (size_t i = 0; i < rphd_sweep_point_count(sweep.get()); ++i) {
        double delta = 0.0, sep = 0.0, dir = 0.0;
        rphd_sweep_point(sweep.get(), i, &delta, &sep, &dir);
        std::printf("%10.6g %14.6g %14.6g\n", delta, sep, dir);
    }
    std::printf("tables written to %s\n", o.out_dir.c_str());
    return 0;
}

int cmd_scenario(const CommonOptions& o, int trial) {
    ConfigPtr config;
    if (int rc = build_config(o, config)) return rc;
    if (rphd_status s = rphd_scenario_write(config.get(), trial, o.out_dir.c_str()); s != RPHD_OK)
        return report(s, "scenario");
    std::printf("truth.tsv and scans.tsv written to %s\n", o.out_dir.c_str());
    return 0;
}

int cmd_selftest(unsigned long long seed) {
    int failures = 0;
    auto print = [](const char* name, int passed, const char* detail, void*) {
        std::printf("[%s] %s%s%s\n", passed ? "PASS" : "FAIL", name, *detail ? ": " : "", detail);
    };
    if (rphd_status s = rphd_selftest(seed, print, nullptr, &failures); s != RPHD_OK) return report(s, "selftest");
    std::printf("%d check(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Roughened particle PHD filter: Monte Carlo benchmark driver"};
    app.set_version_flag("--version", std::string(rphd_version()));
    app.require_subcommand(1);

    CommonOptions run_opts;
    auto* run = app.add_subcommand("run", "Run every variant over the configured trials and write result tables");
    add_common(run, run_opts);

    CommonOptions sweep_opts;
    std::string deltas;
    auto* sweep = app.add_subcommand("sweep", "Gain ratio of both roughening modes across jitter strengths");
    add_common(sweep, sweep_opts);
    sweep->add_option("--deltas", deltas, "Comma-separated jitter stds (default 0,0.1,0.2,0.4,0.8,1.6,2.5)");

    CommonOptions scen_opts;
    int trial = 0;
    auto* scen = app.add_subcommand("scenario", "Dump ground truth and measurement scans of one trial");
    add_common(scen, scen_opts);
    scen->add_option("--trial", trial, "Trial index")->check(CLI::NonNegativeNumber);

    unsigned long long self_seed = 12345;
    auto* self = app.add_subcommand("selftest", "Run the built-in oracle and invariant checks");
    self->add_option("--seed", self_seed, "Seed for the random instances");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(run_opts);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, deltas);
    if (scen->parsed()) return cmd_scenario(scen_opts, trial);
    if (self->parsed()) return cmd_selftest(self_seed);
    return 2;
}
