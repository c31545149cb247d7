/* Copyright 2026 The gibbslab Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the gibbslab core. Every function returns a gl_status;
 * on failure, gl_last_error() describes the most recent error on the
 * calling thread. Strings returned through char** are owned by the caller
 * and released with gl_string_free.
 */
#ifndef GIBBSLAB_GIBBSLAB_H
#define GIBBSLAB_GIBBSLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(GIBBSLAB_BUILDING_LIBRARY)
#define GL_API __attribute__((visibility("default")))
#else
#define GL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gl_status {
  GL_OK = 0,
  GL_ERR_INVALID_ARGUMENT = 1,
  GL_ERR_RESOLUTION = 2,
  GL_ERR_NUMERICAL = 3,
  GL_ERR_DIVERGENCE = 4,
  GL_ERR_IO = 5,
  GL_ERR_INTERNAL = 6
} gl_status;

GL_API const char* gl_version(void);
GL_API const char* gl_last_error(void);
GL_API const char* gl_status_name(gl_status status);
GL_API void gl_string_free(char* text);

/* Ground states. */
typedef struct gl_ground_state gl_ground_state;

typedef struct gl_ground_state_info {
  int dim;
  int p;
  double mass;
  double mass_error;
  double grad_norm;
  double gns_constant;
  double functional_minimum;
  double sharp_constant;
  double residual_max;
  double center_value;
  double edge_ratio;
  double spacing;
  double extent;
} gl_ground_state_info;

GL_API gl_status gl_ground_state_solve(int dim, int p, gl_ground_state** out);
GL_API void gl_ground_state_free(gl_ground_state* gs);
GL_API gl_status gl_ground_state_info_get(const gl_ground_state* gs,
                                          gl_ground_state_info* out);
GL_API gl_status gl_ground_state_profile_csv(const gl_ground_state* gs, char** out);
GL_API gl_status gl_ground_state_summary_json(const gl_ground_state* gs, char** out);

/* Bessel zero tables. */
typedef struct gl_bessel_table gl_bessel_table;

GL_API gl_status gl_bessel_table_create(size_t count, gl_bessel_table** out);
GL_API void gl_bessel_table_free(gl_bessel_table* table);
GL_API size_t gl_bessel_table_count(const gl_bessel_table* table);
/* index is 0-based. */
GL_API gl_status gl_bessel_table_entry(const gl_bessel_table* table, size_t index,
                                       double* zero, double* j1_at_zero);
GL_API gl_status gl_bessel_table_csv(const gl_bessel_table* table, char** out);

/* Truncated Gibbs ensembles. */
typedef enum gl_sampler { GL_SAMPLER_PLAIN = 0, GL_SAMPLER_TILTED = 1 } gl_sampler;
typedef enum gl_normalization {
  GL_NORMALIZATION_GFF = 0,
  GL_NORMALIZATION_PAPER_LITERAL = 1
} gl_normalization;
typedef enum gl_convention {
  GL_CONVENTION_NORMALIZED = 0,
  GL_CONVENTION_PAPER_LITERAL = 1
} gl_convention;

typedef struct gl_ensemble_config {
  int dim;
  int p;
  double K; /* +inf for no cutoff */
  size_t n_modes;
  size_t n_samples;
  uint64_t seed;
  size_t resolution; /* 0 selects the default grid */
  gl_sampler sampler;
  int calibration;
  gl_normalization normalization;
  gl_convention convention;
} gl_ensemble_config;

typedef struct gl_partition_report {
  double estimate;
  double log_estimate;
  double standard_error;
  double log_standard_error;
  double effective_sample_size;
  double fraction_inside_cutoff;
  size_t n_modes;
  size_t n_samples;
} gl_partition_report;

GL_API void gl_ensemble_config_default(gl_ensemble_config* cfg);
/* json may be NULL; otherwise receives the report with the embedded config. */
GL_API gl_status gl_partition_estimate(const gl_ensemble_config* cfg,
                                       gl_partition_report* out, char** json);

/* Divergence scans over a truncation schedule. */
typedef struct gl_scan gl_scan;

typedef enum gl_verdict {
  GL_VERDICT_STABLE = 0,
  GL_VERDICT_DIVERGING = 1,
  GL_VERDICT_INCONCLUSIVE = 2
} gl_verdict;

typedef struct gl_scan_summary {
  gl_verdict verdict;
  double slope;
  double slope_error;
  size_t fitted_points;
  size_t schedule_length;
} gl_scan_summary;

GL_API gl_status gl_scan_run(const gl_ensemble_config* base, const size_t* schedule,
                             size_t schedule_length, gl_scan** out);
GL_API void gl_scan_free(gl_scan* scan);
GL_API gl_status gl_scan_summary_get(const gl_scan* scan, gl_scan_summary* out);
GL_API gl_status gl_scan_csv(const gl_scan* scan, char** out);
GL_API const char* gl_verdict_name(gl_verdict verdict);

/* Tail curves as CSV with columns level,empirical,err,theoretical,valid_flag.
 * Levels must be strictly increasing. */
GL_API gl_status gl_tail_constrained_csv(const gl_ensemble_config* cfg,
                                         const double* levels, size_t n_levels,
                                         char** out);
/* P(||u_{>=k}||_p > lambda) for N-mode loops against the dyadic bound with
 * rate r and a probed Bernstein constant. */
GL_API gl_status gl_tail_high_freq_csv(int k, double r, int p, size_t n_modes,
                                       size_t n_samples, uint64_t seed,
                                       const double* levels, size_t n_levels,
                                       char** out);
/* P(||v_{>=k}||_{L^4} >= lambda) for radial fields against the block chain
 * with geometric rate s. */
GL_API gl_status gl_tail_block_2d_csv(int k, double s, size_t n_modes,
                                      size_t n_samples, uint64_t seed,
                                      const double* levels, size_t n_levels,
                                      char** out);

/* Invariant suite. */
typedef struct gl_verify_report gl_verify_report;

GL_API gl_status gl_verify_run(const char* const* faults, size_t n_faults,
                               gl_verify_report** out);
GL_API void gl_verify_free(gl_verify_report* report);
GL_API int gl_verify_passed(const gl_verify_report* report);
GL_API size_t gl_verify_count(const gl_verify_report* report);
/* Borrowed strings stay valid until the report is freed. */
GL_API gl_status gl_verify_check(const gl_verify_report* report, size_t index,
                                 const char** module, const char** name,
                                 int* passed, double* seconds);
GL_API gl_status gl_verify_junit(const gl_verify_report* report, char** out);

#ifdef __cplusplus
}
#endif

#endif /* GIBBSLAB_GIBBSLAB_H */
