// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "gibbslab/gibbslab.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "gibbslab/bessel_radial.hpp"
#include "gibbslab/error.hpp"
#include "gibbslab/gibbs_estimator.hpp"
#include "gibbslab/ground_state.hpp"
#include "gibbslab/tail_lab.hpp"
#include "gibbslab/verify.hpp"

using namespace gibbslab;

struct gl_ground_state {
  GroundState gs;
};
struct gl_bessel_table {
  std::shared_ptr<const BesselTable> table;
};
struct gl_scan {
  DivergenceVerdict result;
  std::string csv;
};
struct gl_verify_report {
  VerifyReport report;
};

namespace {

thread_local std::string last_error;

gl_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return GL_ERR_INVALID_ARGUMENT;
    case ErrorKind::Resolution: return GL_ERR_RESOLUTION;
    case ErrorKind::Numerical: return GL_ERR_NUMERICAL;
    case ErrorKind::Divergence: return GL_ERR_DIVERGENCE;
    case ErrorKind::Io: return GL_ERR_IO;
  }
  return GL_ERR_INTERNAL;
}

template <class Fn>
gl_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return GL_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return GL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return GL_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return GL_ERR_INTERNAL;
  }
}

void need(const void* ptr, const char* what) {
  if (ptr == nullptr) fail(ErrorKind::InvalidArgument, std::string(what) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

EnsembleConfig to_core(const gl_ensemble_config& c) {
  EnsembleConfig cfg;
  cfg.dim = c.dim;
  cfg.p = c.p;
  cfg.K = c.K;
  cfg.n_modes = c.n_modes;
  cfg.n_samples = c.n_samples;
  cfg.seed = c.seed;
  cfg.resolution = c.resolution;
  cfg.sampler = c.sampler == GL_SAMPLER_TILTED ? SamplerMode::Tilted : SamplerMode::Plain;
  cfg.calibration = c.calibration != 0;
  cfg.normalization = c.normalization == GL_NORMALIZATION_PAPER_LITERAL
                          ? Normalization::PaperLiteral
                          : Normalization::Gff;
  cfg.convention = c.convention == GL_CONVENTION_PAPER_LITERAL ? RadialConvention::PaperLiteral
                                                              : RadialConvention::Normalized;
  return cfg;
}

std::vector<double> level_vector(const double* levels, std::size_t n) {
  need(levels, "levels");
  require(n > 0, "at least one level is required");
  return std::vector<double>(levels, levels + n);
}

}  // namespace

extern "C" {

const char* gl_version(void) { return GIBBSLAB_VERSION; }
const char* gl_last_error(void) { return last_error.c_str(); }

const char* gl_status_name(gl_status status) {
  switch (status) {
    case GL_OK: return "ok";
    case GL_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case GL_ERR_RESOLUTION: return "resolution";
    case GL_ERR_NUMERICAL: return "numerical";
    case GL_ERR_DIVERGENCE: return "divergence";
    case GL_ERR_IO: return "io";
    case GL_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void gl_string_free(char* text) { std::free(text); }

gl_status gl_ground_state_solve(int dim, int p, gl_ground_state** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    *out = new gl_ground_state{solve_ground_state(dim, p)};
  });
}

void gl_ground_state_free(gl_ground_state* gs) { delete gs; }

gl_status gl_ground_state_info_get(const gl_ground_state* gs, gl_ground_state_info* out) {
  return guarded([&] {
    need(gs, "ground state");
    need(out, "out");
    const auto& g = gs->gs;
    *out = {g.dim(),          g.p(),         g.mass(),          g.mass_error(),
            g.grad_norm(),    g.gns_constant(), g.functional_minimum(), g.sharp_constant(),
            g.residual_max(), g.center_value(), g.edge_ratio(),  g.spacing(),
            g.extent()};
  });
}

gl_status gl_ground_state_profile_csv(const gl_ground_state* gs, char** out) {
  return guarded([&] {
    need(gs, "ground state");
    need(out, "out");
    *out = dup_string(profile_csv(gs->gs));
  });
}

gl_status gl_ground_state_summary_json(const gl_ground_state* gs, char** out) {
  return guarded([&] {
    need(gs, "ground state");
    need(out, "out");
    *out = dup_string(summary_json(gs->gs));
  });
}

gl_status gl_bessel_table_create(size_t count, gl_bessel_table** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    require(count > 0, "bessel table: count must be positive");
    *out = new gl_bessel_table{bessel_zeros(count)};
  });
}

void gl_bessel_table_free(gl_bessel_table* table) { delete table; }

size_t gl_bessel_table_count(const gl_bessel_table* table) {
  return table == nullptr ? 0 : table->table->count();
}

gl_status gl_bessel_table_entry(const gl_bessel_table* table, size_t index, double* zero,
                                double* j1_at_zero) {
  return guarded([&] {
    need(table, "table");
    require(index < table->table->count(), "bessel table: index out of range");
    if (zero != nullptr) *zero = table->table->zeros[index];
    if (j1_at_zero != nullptr) *j1_at_zero = table->table->j1_at_zeros[index];
  });
}

gl_status gl_bessel_table_csv(const gl_bessel_table* table, char** out) {
  return guarded([&] {
    need(table, "table");
    need(out, "out");
    *out = dup_string(bessel_table_csv(*table->table));
  });
}

void gl_ensemble_config_default(gl_ensemble_config* cfg) {
  if (cfg == nullptr) return;
  const EnsembleConfig d;
  *cfg = {d.dim,  d.p, d.K, d.n_modes, d.n_samples, d.seed, d.resolution, GL_SAMPLER_PLAIN, 0,
          GL_NORMALIZATION_GFF, GL_CONVENTION_NORMALIZED};
}

gl_status gl_partition_estimate(const gl_ensemble_config* cfg, gl_partition_report* out,
                                char** json) {
  return guarded([&] {
    need(cfg, "config");
    need(out, "out");
    const EnsembleConfig core = to_core(*cfg);
    const EstimatorReport r = estimate_partition(core);
    *out = {r.estimate, r.log_estimate, r.standard_error, r.log_standard_error,
            r.effective_sample_size, r.fraction_inside_cutoff, r.n_modes, r.n_samples};
    if (json != nullptr) {
      nlohmann::json doc = nlohmann::json::parse(to_json(r));
      doc["config"] = nlohmann::json::parse(to_json(core));
      doc["version"] = GIBBSLAB_VERSION;
      *json = dup_string(doc.dump(2));
    }
  });
}

gl_status gl_scan_run(const gl_ensemble_config* base, const size_t* schedule,
                      size_t schedule_length, gl_scan** out) {
  return guarded([&] {
    need(base, "config");
    need(schedule, "schedule");
    need(out, "out");
    *out = nullptr;
    const std::vector<std::size_t> sched(schedule, schedule + schedule_length);
    auto scan = std::make_unique<gl_scan>();
    scan->result = divergence_scan(to_core(*base), sched);
    scan->csv = scan_csv(scan->result);
    *out = scan.release();
  });
}

void gl_scan_free(gl_scan* scan) { delete scan; }

gl_status gl_scan_summary_get(const gl_scan* scan, gl_scan_summary* out) {
  return guarded([&] {
    need(scan, "scan");
    need(out, "out");
    const auto& r = scan->result;
    const gl_verdict v = r.verdict == Verdict::Stable      ? GL_VERDICT_STABLE
                         : r.verdict == Verdict::Diverging ? GL_VERDICT_DIVERGING
                                                           : GL_VERDICT_INCONCLUSIVE;
    *out = {v, r.slope, r.slope_error, r.fitted_points, r.reports.size()};
  });
}

gl_status gl_scan_csv(const gl_scan* scan, char** out) {
  return guarded([&] {
    need(scan, "scan");
    need(out, "out");
    *out = dup_string(scan->csv);
  });
}

const char* gl_verdict_name(gl_verdict verdict) {
  switch (verdict) {
    case GL_VERDICT_STABLE: return to_string(Verdict::Stable);
    case GL_VERDICT_DIVERGING: return to_string(Verdict::Diverging);
    case GL_VERDICT_INCONCLUSIVE: return to_string(Verdict::Inconclusive);
  }
  return "unknown";
}

gl_status gl_tail_constrained_csv(const gl_ensemble_config* cfg, const double* levels,
                                  size_t n_levels, char** out) {
  return guarded([&] {
    need(cfg, "config");
    need(out, "out");
    const auto lv = level_vector(levels, n_levels);
    const auto samples = sample_ensemble(to_core(*cfg));
    *out = dup_string(to_csv(constrained_tail_curve(samples, lv)));
  });
}

gl_status gl_tail_high_freq_csv(int k, double r, int p, size_t n_modes, size_t n_samples,
                                uint64_t seed, const double* levels, size_t n_levels,
                                char** out) {
  return guarded([&] {
    need(out, "out");
    const auto lv = level_vector(levels, n_levels);
    double c_hat = 0.0;
    for (int j = 3; j <= 8; ++j)
      c_hat = std::max(c_hat, bernstein_probe(j, static_cast<double>(p), 2000, seed).constant);
    const double c_eff = effective_bernstein_constant(c_hat, Normalization::Gff);
    TailCurve curve;
    for (double lambda : lv) {
      const auto emp = high_freq_empirical(k, lambda, p, n_modes, n_samples, seed);
      const auto bound = high_freq_tail_bound(k, lambda, r, p, c_eff);
      curve.rows.push_back({lambda, emp.probability, emp.error, bound.bound, bound.valid,
                            emp.hits >= kResolvableHits});
    }
    curve.validate();
    *out = dup_string(to_csv(curve));
  });
}

gl_status gl_tail_block_2d_csv(int k, double s, size_t n_modes, size_t n_samples,
                               uint64_t seed, const double* levels, size_t n_levels,
                               char** out) {
  return guarded([&] {
    need(out, "out");
    const auto lv = level_vector(levels, n_levels);
    const std::vector<double> grid{1.5, 2.0, 3.0};
    double c_hat = 1e300, block_constant = 0.0;
    for (int j = 2; j <= 6; ++j) {
      const auto est = block_l4_expectation(j, 2000, seed);
      block_constant = std::max(block_constant, est.scaled_constant);
      c_hat = std::min(c_hat, fernique_probe(est.norms, grid).c_hat);
    }
    TailCurve curve;
    for (double lambda : lv) {
      const auto emp = block_tail_empirical_2d(k, lambda, n_modes, n_samples, seed);
      const auto b = block_tail_2d(k, lambda, s, c_hat, block_constant);
      curve.rows.push_back({lambda, emp.probability, emp.error, b.closing_bound, b.valid,
                            emp.hits >= kResolvableHits});
    }
    curve.validate();
    *out = dup_string(to_csv(curve));
  });
}

gl_status gl_verify_run(const char* const* faults, size_t n_faults, gl_verify_report** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    VerifyOptions opts;
    for (size_t i = 0; i < n_faults; ++i) {
      need(faults, "faults");
      need(faults[i], "fault name");
      opts.faults.emplace_back(faults[i]);
    }
    *out = new gl_verify_report{run_verify(opts)};
  });
}

void gl_verify_free(gl_verify_report* report) { delete report; }

int gl_verify_passed(const gl_verify_report* report) {
  return report != nullptr && report->report.passed() ? 1 : 0;
}

size_t gl_verify_count(const gl_verify_report* report) {
  return report == nullptr ? 0 : report->report.checks.size();
}

gl_status gl_verify_check(const gl_verify_report* report, size_t index, const char** module,
                          const char** name, int* passed, double* seconds) {
  return guarded([&] {
    need(report, "report");
    require(index < report->report.checks.size(), "verify: index out of range");
    const auto& c = report->report.checks[index];
    if (module != nullptr) *module = c.module.c_str();
    if (name != nullptr) *name = c.name.c_str();
    if (passed != nullptr) *passed = c.passed ? 1 : 0;
    if (seconds != nullptr) *seconds = c.seconds;
  });
}

gl_status gl_verify_junit(const gl_verify_report* report, char** out) {
  return guarded([&] {
    need(report, "report");
    need(out, "out");
    *out = dup_string(to_junit(report->report));
  });
}

}  // extern "C"
