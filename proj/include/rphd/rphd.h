/*
 * rphd.h - C interface to the roughened particle PHD filter library.
 *
 * All objects are opaque handles created and released through this API.
 * Every fallible call returns an rphd_status; on failure a message describing
 * the error is available from rphd_last_error() on the calling thread.
 */
#ifndef RPHD_H
#define RPHD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RPHD_BUILDING_LIBRARY)
#    define RPHD_API __declspec(dllexport)
#  else
#    define RPHD_API __declspec(dllimport)
#  endif
#else
#  define RPHD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rphd_status {
    RPHD_OK = 0,
    RPHD_ERR_INVALID_ARGUMENT = 1, /* null handle or out-of-domain parameter */
    RPHD_ERR_CONFIG = 2,           /* unknown key, malformed value, failed validation */
    RPHD_ERR_IO = 3,               /* file could not be read or written */
    RPHD_ERR_OUT_OF_RANGE = 4,     /* index past the end, buffer too small */
    RPHD_ERR_INTERNAL = 5
} rphd_status;

typedef struct rphd_config rphd_config;
typedef struct rphd_summary rphd_summary;
typedef struct rphd_sweep rphd_sweep;
typedef struct rphd_filter rphd_filter;

RPHD_API const char* rphd_version(void);
RPHD_API const char* rphd_status_string(rphd_status status);
/* Message of the last failed call on this thread; "" if none. */
RPHD_API const char* rphd_last_error(void);

/* ---- configuration ---------------------------------------------------- */

/* Presets: "paper-np200", "paper-np1000". */
RPHD_API rphd_status rphd_config_preset(const char* name, rphd_config** out);
/* Flat `key = value` text; see README for the key list. */
RPHD_API rphd_status rphd_config_parse(const char* text, rphd_config** out);
RPHD_API rphd_status rphd_config_load(const char* path, rphd_config** out);
/* Applies one key. The config is not re-validated until use. */
RPHD_API rphd_status rphd_config_set(rphd_config* config, const char* key, const char* value);
RPHD_API rphd_status rphd_config_validate(const rphd_config* config);
/* Writes the config as text. If `capacity` is too small, nothing is written,
 * `*needed` receives the required size including the terminator and
 * RPHD_ERR_OUT_OF_RANGE is returned. */
RPHD_API rphd_status rphd_config_to_text(const rphd_config* config, char* buffer, size_t capacity, size_t* needed);
RPHD_API void rphd_config_free(rphd_config* config);

/* ---- Monte Carlo runs ------------------------------------------------- */

RPHD_API rphd_status rphd_run(const rphd_config* config, rphd_summary** out);
/* Writes trials.tsv, summary.tsv and per_step.tsv into `out_dir` (created if missing). */
RPHD_API rphd_status rphd_summary_write(const rphd_summary* summary, const rphd_config* config, const char* out_dir);
RPHD_API size_t rphd_summary_variant_count(const rphd_summary* summary);
/* NULL if the index is out of range. Valid while the summary lives. */
RPHD_API const char* rphd_summary_variant_name(const rphd_summary* summary, size_t variant);
RPHD_API rphd_status rphd_summary_mean_ospa(const rphd_summary* summary, size_t variant, double* out);
/* Mean OSPA over steps [first_step, last_step] of every trial. */
RPHD_API rphd_status rphd_summary_mean_ospa_steps(const rphd_summary* summary, size_t variant, int first_step,
                                                  int last_step, double* out);
RPHD_API rphd_status rphd_summary_gain_ratio(const rphd_summary* summary, size_t variant, double* out);
RPHD_API void rphd_summary_free(rphd_summary* summary);

RPHD_API rphd_status rphd_sweep_run(const rphd_config* config, rphd_sweep** out);
RPHD_API size_t rphd_sweep_point_count(const rphd_sweep* sweep);
RPHD_API rphd_status rphd_sweep_point(const rphd_sweep* sweep, size_t index, double* delta, double* separate_gain,
                                      double* direct_gain);
/* Writes sweep.tsv plus the trials/summary/per_step tables of the expanded run. */
RPHD_API rphd_status rphd_sweep_write(const rphd_sweep* sweep, const char* out_dir);
RPHD_API void rphd_sweep_free(rphd_sweep* sweep);

/* Writes truth.tsv and scans.tsv of one trial realization. */
RPHD_API rphd_status rphd_scenario_write(const rphd_config* config, int trial, const char* out_dir);

/* ---- self test -------------------------------------------------------- */

typedef void (*rphd_check_callback)(const char* name, int passed, const char* detail, void* user);
/* Runs the built-in oracle checks, reporting each through `callback` (may be NULL). */
RPHD_API rphd_status rphd_selftest(uint64_t seed, rphd_check_callback callback, void* user, int* failures);

/* ---- single filter ---------------------------------------------------- */

/* A filter using the models, filter settings and the named variant's
 * roughening from `config`. `variant` may be NULL for the basic arm. */
RPHD_API rphd_status rphd_filter_create(const rphd_config* config, const char* variant, uint64_t seed,
                                        rphd_filter** out);
/* One scan: `count` measurements as interleaved (zx, zy) pairs. */
RPHD_API rphd_status rphd_filter_step(rphd_filter* filter, const double* measurements, size_t count);
RPHD_API size_t rphd_filter_cardinality(const rphd_filter* filter);
RPHD_API double rphd_filter_mass(const rphd_filter* filter);
RPHD_API size_t rphd_filter_particle_count(const rphd_filter* filter);
/* Latest state estimates, 4 doubles each (px, vx, py, vy). */
RPHD_API rphd_status rphd_filter_estimates(const rphd_filter* filter, double* states, size_t capacity,
                                           size_t* count);
/* Current particle set as column text (step px vx py vy weight). */
RPHD_API rphd_status rphd_filter_write_particles(const rphd_filter* filter, const char* path);
RPHD_API void rphd_filter_free(rphd_filter* filter);

#ifdef __cplusplus
}
#endif

#endif /* RPHD_H */
