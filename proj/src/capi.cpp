#include "rphd/rphd.h"

#include "rphd/config.hpp"
#include "rphd/harness.hpp"
#include "rphd/phd_filter.hpp"
#include "rphd/selftest.hpp"
#include "rphd/table_format.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <new>
#include <string>

struct rphd_config {
    rphd::harness::RunConfig value;
};

struct rphd_summary {
    rphd::harness::RunSummary value;
};

struct rphd_sweep {
    rphd::harness::RunConfig config;
    rphd::harness::SweepSummary value;
};

struct rphd_filter {
    rphd::filter::PhdFilter filter;
    rphd::filter::StepOutput last;
};

namespace {

thread_local std::string last_error;

rphd_status fail(rphd_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

/// Runs `fn`, mapping exceptions onto status codes.
template <typename Fn>
rphd_status guarded(Fn&& fn) {
    try {
        last_error.clear();
        return fn();
    } catch (const rphd::config::ConfigError& e) {
        return fail(RPHD_ERR_CONFIG, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(RPHD_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(RPHD_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(RPHD_ERR_OUT_OF_RANGE, e.what());
    } catch (const std::ios_base::failure& e) {
        return fail(RPHD_ERR_IO, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(RPHD_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(RPHD_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(RPHD_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(RPHD_ERR_INTERNAL, "unknown error");
    }
}

/// Validation failures surface as RPHD_ERR_CONFIG.
void validate_config(const rphd::harness::RunConfig& config) {
    try {
        config.validate();
    } catch (const rphd::config::ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw rphd::config::ConfigError(e.what());
    }
}

std::ofstream open_output(const std::filesystem::path& dir, const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write " + (dir / name).string());
    return out;
}

std::filesystem::path prepare_dir(const char* out_dir) {
    if (!out_dir || !*out_dir) throw std::invalid_argument("output directory must be given");
    std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_run_tables(const std::filesystem::path& dir, const rphd::harness::RunConfig& config,
                      const rphd::harness::RunSummary& summary) {
    auto trials = open_output(dir, "trials.tsv");
    rphd::harness::write_trials_table(trials, config, summary);
    auto table = open_output(dir, "summary.tsv");
    rphd::harness::write_summary_table(table, summary);
    auto steps = open_output(dir, "per_step.tsv");
    rphd::harness::write_per_step_table(steps, summary);
    if (!trials || !table || !steps) throw std::ios_base::failure("write failed in " + dir.string());
}

#define RPHD_REQUIRE(ptr)                                                                   \
    do {                                                                                    \
        if (!(ptr)) return fail(RPHD_ERR_INVALID_ARGUMENT, #ptr " must not be NULL");       \
    } while (0)

}  // namespace

extern "C" {

const char* rphd_version(void) { return "1.0.0"; }

const char* rphd_status_string(rphd_status status) {
    switch (status) {
        case RPHD_OK: return "ok";
        case RPHD_ERR_INVALID_ARGUMENT: return "invalid argument";
        case RPHD_ERR_CONFIG: return "configuration error";
        case RPHD_ERR_IO: return "i/o error";
        case RPHD_ERR_OUT_OF_RANGE: return "out of range";
        case RPHD_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* rphd_last_error(void) { return last_error.c_str(); }

rphd_status rphd_config_preset(const char* name, rphd_config** out) {
    RPHD_REQUIRE(name);
    RPHD_REQUIRE(out);
    return guarded([&] {
        *out = new rphd_config{rphd::config::preset(name)};
        return RPHD_OK;
    });
}

rphd_status rphd_config_parse(const char* text, rphd_config** out) {
    RPHD_REQUIRE(text);
    RPHD_REQUIRE(out);
    return guarded([&] {
        *out = new rphd_config{rphd::config::parse(text)};
        return RPHD_OK;
    });
}

rphd_status rphd_config_load(const char* path, rphd_config** out) {
    RPHD_REQUIRE(path);
    RPHD_REQUIRE(out);
    return guarded([&] {
        if (!std::filesystem::exists(path)) return fail(RPHD_ERR_IO, std::string("cannot open config file '") + path + "'");
        *out = new rphd_config{rphd::config::load(path)};
        return RPHD_OK;
    });
}

rphd_status rphd_config_set(rphd_config* config, const char* key, const char* value) {
    RPHD_REQUIRE(config);
    RPHD_REQUIRE(key);
    RPHD_REQUIRE(value);
    return guarded([&] {
        rphd::config::apply_setting(config->value, key, value);
        return RPHD_OK;
    });
}

rphd_status rphd_config_validate(const rphd_config* config) {
    RPHD_REQUIRE(config);
    return guarded([&] {
        validate_config(config->value);
        return RPHD_OK;
    });
}

rphd_status rphd_config_to_text(const rphd_config* config, char* buffer, size_t capacity, size_t* needed) {
    RPHD_REQUIRE(config);
    return guarded([&] {
        const std::string text = rphd::config::to_text(config->value);
        if (needed) *needed = text.size() + 1;
        if (!buffer || capacity < text.size() + 1) return fail(RPHD_ERR_OUT_OF_RANGE, "buffer too small");
        std::memcpy(buffer, text.c_str(), text.size() + 1);
        return RPHD_OK;
    });
}

void rphd_config_free(rphd_config* config) { delete config; }

rphd_status rphd_run(const rphd_config* config, rphd_summary** out) {
    RPHD_REQUIRE(config);
    RPHD_REQUIRE(out);
    return guarded([&] {
        validate_config(config->value);
        *out = new rphd_summary{rphd::harness::run(config->value)};
        return RPHD_OK;
    });
}

rphd_status rphd_summary_write(const rphd_summary* summary, const rphd_config* config, const char* out_dir) {
    RPHD_REQUIRE(summary);
    RPHD_REQUIRE(config);
    return guarded([&] {
        if (summary->value.variants.size() != config->value.variants.size())
            return fail(RPHD_ERR_INVALID_ARGUMENT, "summary and config describe different variants");
        write_run_tables(prepare_dir(out_dir), config->value, summary->value);
        return RPHD_OK;
    });
}

size_t rphd_summary_variant_count(const rphd_summary* summary) {
    return summary ? summary->value.variants.size() : 0;
}

const char* rphd_summary_variant_name(const rphd_summary* summary, size_t variant) {
    if (!summary || variant >= summary->value.variants.size()) return nullptr;
    return summary->value.variants[variant].name.c_str();
}

rphd_status rphd_summary_mean_ospa(const rphd_summary* summary, size_t variant, double* out) {
    RPHD_REQUIRE(summary);
    RPHD_REQUIRE(out);
    if (variant >= summary->value.variants.size()) return fail(RPHD_ERR_OUT_OF_RANGE, "variant index out of range");
    *out = summary->value.variants[variant].mean_ospa_all;
    return RPHD_OK;
}

rphd_status rphd_summary_mean_ospa_steps(const rphd_summary* summary, size_t variant, int first_step, int last_step,
                                         double* out) {
    RPHD_REQUIRE(summary);
    RPHD_REQUIRE(out);
    if (variant >= summary->value.variants.size()) return fail(RPHD_ERR_OUT_OF_RANGE, "variant index out of range");
    if (first_step > last_step) return fail(RPHD_ERR_INVALID_ARGUMENT, "first_step must not exceed last_step");
    *out = summary->value.mean_ospa_over(variant, first_step, last_step);
    return RPHD_OK;
}

rphd_status rphd_summary_gain_ratio(const rphd_summary* summary, size_t variant, double* out) {
    RPHD_REQUIRE(summary);
    RPHD_REQUIRE(out);
    if (variant >= summary->value.variants.size()) return fail(RPHD_ERR_OUT_OF_RANGE, "variant index out of range");
    *out = summary->value.variants[variant].gain_ratio;
    return RPHD_OK;
}

void rphd_summary_free(rphd_summary* summary) { delete summary; }

rphd_status rphd_sweep_run(const rphd_config* config, rphd_sweep** out) {
    RPHD_REQUIRE(config);
    RPHD_REQUIRE(out);
    return guarded([&] {
        validate_config(config->value);
        auto result = rphd::harness::sweep(config->value);
        rphd::harness::RunConfig expanded = config->value;
        expanded.variants = rphd::harness::sweep_variants(config->value);
        *out = new rphd_sweep{std::move(expanded), std::move(result)};
        return RPHD_OK;
    });
}

size_t rphd_sweep_point_count(const rphd_sweep* sweep) { return sweep ? sweep->value.points.size() : 0; }

rphd_status rphd_sweep_point(const rphd_sweep* sweep, size_t index, double* delta, double* separate_gain,
                             double* direct_gain) {
    RPHD_REQUIRE(sweep);
    if (index >= sweep->value.points.size()) return fail(RPHD_ERR_OUT_OF_RANGE, "sweep point index out of range");
    const auto& p = sweep->value.points[index];
    if (delta) *delta = p.delta;
    if (separate_gain) *separate_gain = p.separate_gain;
    if (direct_gain) *direct_gain = p.direct_gain;
    return RPHD_OK;
}

rphd_status rphd_sweep_write(const rphd_sweep* sweep, const char* out_dir) {
    RPHD_REQUIRE(sweep);
    return guarded([&] {
        const auto dir = prepare_dir(out_dir);
        auto table = open_output(dir, "sweep.tsv");
        rphd::harness::write_sweep_table(table, sweep->value);
        if (!table) throw std::ios_base::failure("write failed in " + dir.string());
        write_run_tables(dir, sweep->config, sweep->value.run);
        return RPHD_OK;
    });
}

void rphd_sweep_free(rphd_sweep* sweep) { delete sweep; }

rphd_status rphd_scenario_write(const rphd_config* config, int trial, const char* out_dir) {
    RPHD_REQUIRE(config);
    if (trial < 0) return fail(RPHD_ERR_INVALID_ARGUMENT, "trial index must be >= 0");
    return guarded([&] {
        validate_config(config->value);
        const auto realization = rphd::harness::realize(config->value, trial);
        const auto& truth = realization.truth;
        const auto& scans = realization.scans;
        const auto dir = prepare_dir(out_dir);
        auto t = open_output(dir, "truth.tsv");
        rphd::scenario::write_truth(t, truth);
        auto s = open_output(dir, "scans.tsv");
        rphd::scenario::write_scans(s, scans);
        if (!t || !s) throw std::ios_base::failure("write failed in " + dir.string());
        return RPHD_OK;
    });
}

rphd_status rphd_selftest(uint64_t seed, rphd_check_callback callback, void* user, int* failures) {
    return guarded([&] {
        const auto results = rphd::selftest::run_all(seed);
        int failed = 0;
        for (const auto& r : results) {
            if (!r.passed) ++failed;
            if (callback) callback(r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(), user);
        }
        if (failures) *failures = failed;
        return RPHD_OK;
    });
}

rphd_status rphd_filter_create(const rphd_config* config, const char* variant, uint64_t seed, rphd_filter** out) {
    RPHD_REQUIRE(config);
    RPHD_REQUIRE(out);
    return guarded([&] {
        const auto& c = config->value;
        validate_config(c);
        const rphd::harness::Variant* chosen = &c.variants[c.basic_index()];
        if (variant) {
            chosen = nullptr;
            for (const auto& v : c.variants)
                if (v.name == variant) chosen = &v;
            if (!chosen) return fail(RPHD_ERR_INVALID_ARGUMENT, std::string("no variant named '") + variant + "'");
        }
        *out = new rphd_filter{rphd::filter::PhdFilter(c.models, c.filter, chosen->roughening, seed), {}};
        return RPHD_OK;
    });
}

rphd_status rphd_filter_step(rphd_filter* filter, const double* measurements, size_t count) {
    RPHD_REQUIRE(filter);
    if (count > 0 && !measurements) return fail(RPHD_ERR_INVALID_ARGUMENT, "measurements must not be NULL");
    return guarded([&] {
        std::vector<rphd::Measurement> scan(count);
        for (size_t i = 0; i < count; ++i) scan[i] = {measurements[2 * i], measurements[2 * i + 1]};
        filter->last = filter->filter.step(scan);
        return RPHD_OK;
    });
}

size_t rphd_filter_cardinality(const rphd_filter* filter) { return filter ? filter->last.estimate.cardinality : 0; }

double rphd_filter_mass(const rphd_filter* filter) { return filter ? filter->last.mass : 0.0; }

size_t rphd_filter_particle_count(const rphd_filter* filter) { return filter ? filter->filter.particles().size() : 0; }

rphd_status rphd_filter_estimates(const rphd_filter* filter, double* states, size_t capacity, size_t* count) {
    RPHD_REQUIRE(filter);
    const auto& est = filter->last.estimate.states;
    if (count) *count = est.size();
    if (capacity < est.size()) return fail(RPHD_ERR_OUT_OF_RANGE, "estimate buffer too small");
    if (!est.empty() && !states) return fail(RPHD_ERR_INVALID_ARGUMENT, "states must not be NULL");
    for (size_t i = 0; i < est.size(); ++i)
        for (size_t d = 0; d < rphd::kStateDim; ++d) states[i * rphd::kStateDim + d] = est[i][d];
    return RPHD_OK;
}

rphd_status rphd_filter_write_particles(const rphd_filter* filter, const char* path) {
    RPHD_REQUIRE(filter);
    RPHD_REQUIRE(path);
    return guarded([&] {
        std::ofstream out(path, std::ios::binary);
        if (!out) return fail(RPHD_ERR_IO, std::string("cannot write ") + path);
        rphd::write_particles(out, filter->filter.particles());
        return out ? RPHD_OK : fail(RPHD_ERR_IO, std::string("write failed: ") + path);
    });
}

void rphd_filter_free(rphd_filter* filter) { delete filter; }

}  // extern "C"
