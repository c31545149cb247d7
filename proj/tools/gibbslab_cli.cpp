// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gibbslab/gibbslab.h"

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDefaultSeed = 20260101;
constexpr int kUsageError = 2;

struct CommandError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(gl_status status, const std::string& what) {
  if (status != GL_OK)
    throw CommandError(what + ": " + gl_status_name(status) + ": " + gl_last_error());
}

// Owning wrapper for strings returned by the library.
struct Text {
  char* ptr = nullptr;
  ~Text() { gl_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

std::string shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

class OutputDir {
 public:
  explicit OutputDir(const std::string& path) : root_(path) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw CommandError("cannot create output directory '" + path + "': " + ec.message());
  }
  void write(const std::string& name, const std::string& content) const {
    if (name.find('/') != std::string::npos || name.find("..") != std::string::npos)
      throw CommandError("refusing to write '" + name + "' outside the output directory");
    const fs::path target = root_ / name;
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw CommandError("cannot write " + target.string());
  }
  const fs::path& root() const { return root_; }

 private:
  fs::path root_;
};

struct Common {
  std::string output = "gibbslab-out";
  std::uint64_t seed = kDefaultSeed;
  bool random_seed = false;
};

struct Ensemble {
  int dim = 1;
  int p = 6;
  std::string normalization = "gff";
  std::string convention = "normalized";
  std::string sampler = "plain";
};

void add_output(CLI::App* cmd, Common& c) {
  cmd->configurable();
  cmd->add_option("-o,--output", c.output, "Output directory");
}

void add_seed(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_flag("--random-seed", c.random_seed, "Draw a fresh seed and record it")
      ->configurable(false);
}

void add_ensemble(CLI::App* cmd, Ensemble& e) {
  cmd->add_option("--dim", e.dim, "Spatial dimension (1 or 2)")->check(CLI::IsMember({1, 2}));
  cmd->add_option("--p", e.p, "Even nonlinearity exponent");
  cmd->add_option("--normalization", e.normalization, "1D spectral weights")
      ->check(CLI::IsMember({"gff", "literal"}));
  cmd->add_option("--convention", e.convention, "2D radial basis convention")
      ->check(CLI::IsMember({"normalized", "literal"}));
  cmd->add_option("--sampler", e.sampler, "Monte Carlo sampler")
      ->check(CLI::IsMember({"plain", "tilted"}));
}

void resolve_seed(CLI::App* cmd, Common& c) {
  if (!c.random_seed) return;
  c.seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
  auto* opt = cmd->get_option("--seed");
  opt->clear();
  opt->add_result(std::to_string(c.seed));
}

gl_ensemble_config ensemble_config(const Ensemble& e, double K, std::size_t n_modes,
                                   std::size_t samples, std::uint64_t seed) {
  gl_ensemble_config cfg;
  gl_ensemble_config_default(&cfg);
  cfg.dim = e.dim;
  cfg.p = e.p;
  cfg.K = K;
  cfg.n_modes = n_modes;
  cfg.n_samples = samples;
  cfg.seed = seed;
  cfg.sampler = e.sampler == "tilted" ? GL_SAMPLER_TILTED : GL_SAMPLER_PLAIN;
  cfg.normalization =
      e.normalization == "literal" ? GL_NORMALIZATION_PAPER_LITERAL : GL_NORMALIZATION_GFF;
  cfg.convention =
      e.convention == "literal" ? GL_CONVENTION_PAPER_LITERAL : GL_CONVENTION_NORMALIZED;
  return cfg;
}

void write_provenance(CLI::App* cmd, const OutputDir& out) {
  out.write("config.ini", "# gibbslab " + std::string(gl_version()) + " " + cmd->get_name() +
                              "\n[" + cmd->get_name() +
                              "]\n" + cmd->config_to_str(true, false));
}

nlohmann::json run_record(CLI::App* cmd) {
  return {{"version", gl_version()}, {"command", cmd->get_name()},
          {"config", cmd->config_to_str(true, false)}};
}

// ---- ground-state -------------------------------------------------------------

nlohmann::json solve_and_describe(int dim, int p, const OutputDir& out, bool print) {
  gl_ground_state* gs = nullptr;
  check(gl_ground_state_solve(dim, p, &gs), "ground-state");
  std::unique_ptr<gl_ground_state, void (*)(gl_ground_state*)> guard(gs, gl_ground_state_free);
  gl_ground_state_info info;
  check(gl_ground_state_info_get(gs, &info), "ground-state");
  Text csv, json;
  check(gl_ground_state_profile_csv(gs, &csv.ptr), "ground-state");
  check(gl_ground_state_summary_json(gs, &json.ptr), "ground-state");
  out.write("profile.csv", csv.str());
  auto summary = nlohmann::json::parse(json.str());
  if (print) {
    std::printf("mass = %.15g\nmass^2 = %.15g\nC_GNS = %.15g\nresidual_max = %.3g\n",
                info.mass, info.mass * info.mass, info.gns_constant, info.residual_max);
  }
  return summary;
}

// ---- threshold-scan -------------------------------------------------------------

std::vector<std::size_t> doubling_schedule(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> s;
  for (std::size_t n = lo; n <= hi; n *= 2) s.push_back(n);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gibbslab: truncated Gibbs ensembles, ground states and tail bounds"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", std::string(gl_version()));
  app.set_config("--config", "", "key=value file under a [command] header, as written to config.ini");

  // ground-state
  Common gs_common;
  int gs_dim = 1, gs_p = 6;
  auto* gs_cmd = app.add_subcommand("ground-state", "Solve for the ground-state profile");
  add_output(gs_cmd, gs_common);
  gs_cmd->add_option("--dim", gs_dim, "Spatial dimension (1 or 2)")->check(CLI::IsMember({1, 2}));
  gs_cmd->add_option("--p", gs_p, "Even nonlinearity exponent");

  // threshold-scan
  Common ts_common;
  Ensemble ts_ens;
  ts_ens.sampler = "tilted";
  std::vector<double> ts_ratios{0.25, 0.5, 0.75, 0.9, 1.1, 1.5};
  std::vector<std::size_t> ts_schedule = doubling_schedule(16, 512);
  std::size_t ts_samples = 100000;
  auto* ts_cmd = app.add_subcommand("threshold-scan", "Divergence scan over K/||phi|| ratios");
  add_output(ts_cmd, ts_common);
  add_seed(ts_cmd, ts_common);
  add_ensemble(ts_cmd, ts_ens);
  ts_cmd->add_option("--ratios", ts_ratios, "K / ||phi|| grid")->delimiter(',');
  ts_cmd->add_option("--schedule", ts_schedule, "Increasing mode counts N")->delimiter(',');
  ts_cmd->add_option("--samples", ts_samples, "Samples per N");

  // tail-scan
  Common tl_common;
  std::string tl_kind = "all";
  int tl_p = 4, tl_k = 3;
  double tl_K = 1.0, tl_r = 1.0 / 12.0, tl_s = 0.25;
  std::size_t tl_modes = 16, tl_modes_hf = 128, tl_modes_2d = 64, tl_samples = 20000;
  std::vector<double> tl_levels{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0};
  auto* tl_cmd = app.add_subcommand("tail-scan", "Empirical tails against their bounds");
  add_output(tl_cmd, tl_common);
  add_seed(tl_cmd, tl_common);
  tl_cmd->add_option("--kind", tl_kind, "Which curves to produce")
      ->check(CLI::IsMember({"all", "constrained", "high-freq", "block-2d"}));
  tl_cmd->add_option("--p", tl_p, "Even exponent for the constrained and high-frequency tails");
  tl_cmd->add_option("--K", tl_K, "Mass cutoff of the constrained tail");
  tl_cmd->add_option("--N", tl_modes, "Modes for the constrained tail");
  tl_cmd->add_option("--N-high-freq", tl_modes_hf, "Modes for the high-frequency tail");
  tl_cmd->add_option("--N-2d", tl_modes_2d, "Radial modes for the 2D block tail");
  tl_cmd->add_option("--k", tl_k, "Cut frequency index");
  tl_cmd->add_option("--r", tl_r, "Dyadic schedule rate, 0 < r < 1/p");
  tl_cmd->add_option("--s", tl_s, "2D geometric schedule rate, 0 < s < 1/2");
  tl_cmd->add_option("--samples", tl_samples, "Monte Carlo samples");
  tl_cmd->add_option("--levels", tl_levels, "Positive levels lambda")->delimiter(',');

  // bessel-table
  Common bt_common;
  std::size_t bt_count = 100;
  auto* bt_cmd = app.add_subcommand("bessel-table", "Zeros of J0 with J1 at each zero");
  add_output(bt_cmd, bt_common);
  bt_cmd->add_option("--count", bt_count, "Number of zeros")->check(CLI::PositiveNumber);

  // partition
  Common pt_common;
  Ensemble pt_ens;
  pt_ens.p = 4;
  double pt_K = 1.0;
  std::size_t pt_modes = 16, pt_samples = 100000, pt_resolution = 0;
  bool pt_calibration = false;
  auto* pt_cmd = app.add_subcommand("partition", "Estimate one truncated partition function");
  add_output(pt_cmd, pt_common);
  add_seed(pt_cmd, pt_common);
  add_ensemble(pt_cmd, pt_ens);
  pt_cmd->add_option("--K", pt_K, "Mass cutoff (inf for none)");
  pt_cmd->add_option("--N", pt_modes, "Number of modes");
  pt_cmd->add_option("--samples", pt_samples, "Monte Carlo samples");
  pt_cmd->add_option("--resolution", pt_resolution, "Grid or node count (0 = automatic)");
  pt_cmd->add_flag("--calibration", pt_calibration, "Drop the nonlinear weight");

  // verify
  Common vf_common;
  std::vector<std::string> vf_faults;
  auto* vf_cmd = app.add_subcommand("verify", "Run the invariant suite");
  add_output(vf_cmd, vf_common);
  vf_cmd->add_option("--inject-fault", vf_faults, "Deliberately break a convention");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  const auto usage = [&](CLI::App* cmd, const std::string& msg) {
    std::cerr << "error: " << msg << "\n\n" << cmd->help();
    return kUsageError;
  };

  try {
    if (gs_cmd->parsed()) {
      if (gs_p % 2 != 0 || gs_p < 4) return usage(gs_cmd, "--p must be an even integer >= 4");
      const OutputDir out(gs_common.output);
      write_provenance(gs_cmd, out);
      auto summary = solve_and_describe(gs_dim, gs_p, out, true);
      summary["run"] = run_record(gs_cmd);
      out.write("summary.json", summary.dump(2) + "\n");
    } else if (ts_cmd->parsed()) {
      if (ts_ens.p % 2 != 0 || ts_ens.p < 4) return usage(ts_cmd, "--p must be an even integer >= 4");
      if (ts_ratios.empty()) return usage(ts_cmd, "--ratios must not be empty");
      for (double r : ts_ratios)
        if (!(r > 0.0) || !std::isfinite(r)) return usage(ts_cmd, "ratios must be positive");
      resolve_seed(ts_cmd, ts_common);
      const OutputDir out(ts_common.output);
      write_provenance(ts_cmd, out);
      auto summary = solve_and_describe(ts_ens.dim, ts_ens.p, out, false);
      out.write("ground_state.json", summary.dump(2) + "\n");
      const double mass = summary.at("mass").get<double>();
      std::string table = "ratio,K,verdict,slope,slope_error,fitted_points\r\n";
      nlohmann::json scans = nlohmann::json::array();
      for (double ratio : ts_ratios) {
        const double K = ratio * mass;
        const auto cfg = ensemble_config(ts_ens, K, ts_schedule.front(), ts_samples, ts_common.seed);
        gl_scan* scan = nullptr;
        check(gl_scan_run(&cfg, ts_schedule.data(), ts_schedule.size(), &scan),
              "threshold-scan ratio " + shortest(ratio));
        std::unique_ptr<gl_scan, void (*)(gl_scan*)> guard(scan, gl_scan_free);
        gl_scan_summary s;
        check(gl_scan_summary_get(scan, &s), "threshold-scan");
        Text csv;
        check(gl_scan_csv(scan, &csv.ptr), "threshold-scan");
        out.write("scan_ratio_" + shortest(ratio) + ".csv", csv.str());
        const char* verdict = gl_verdict_name(s.verdict);
        table += shortest(ratio) + "," + shortest(K) + "," + verdict + "," + shortest(s.slope) +
                 "," + shortest(s.slope_error) + "," + std::to_string(s.fitted_points) + "\r\n";
        scans.push_back({{"ratio", ratio}, {"K", K}, {"verdict", verdict}, {"slope", s.slope},
                         {"slope_error", s.slope_error}});
        std::printf("ratio %-6s K = %-10.6g %-12s slope = %.4g +- %.2g\n", shortest(ratio).c_str(),
                    K, verdict, s.slope, s.slope_error);
        std::fflush(stdout);
      }
      out.write("verdicts.csv", table);
      nlohmann::json run = run_record(ts_cmd);
      run["critical_mass"] = mass;
      run["scans"] = scans;
      out.write("run.json", run.dump(2) + "\n");
    } else if (tl_cmd->parsed()) {
      if (tl_p % 2 != 0 || tl_p < 4) return usage(tl_cmd, "--p must be an even integer >= 4");
      std::sort(tl_levels.begin(), tl_levels.end());
      tl_levels.erase(std::unique(tl_levels.begin(), tl_levels.end()), tl_levels.end());
      if (tl_levels.empty() || !(tl_levels.front() > 0.0))
        return usage(tl_cmd, "--levels must be positive");
      resolve_seed(tl_cmd, tl_common);
      const OutputDir out(tl_common.output);
      write_provenance(tl_cmd, out);
      const bool all = tl_kind == "all";
      if (all || tl_kind == "constrained") {
        Ensemble e;
        e.p = tl_p;
        const auto cfg = ensemble_config(e, tl_K, tl_modes, tl_samples, tl_common.seed);
        std::vector<double> levels{0.0};
        levels.insert(levels.end(), tl_levels.begin(), tl_levels.end());
        Text csv;
        check(gl_tail_constrained_csv(&cfg, levels.data(), levels.size(), &csv.ptr), "tail-scan");
        out.write("tail_constrained.csv", csv.str());
      }
      if (all || tl_kind == "high-freq") {
        Text csv;
        check(gl_tail_high_freq_csv(tl_k, tl_r, tl_p, tl_modes_hf, tl_samples, tl_common.seed,
                                    tl_levels.data(), tl_levels.size(), &csv.ptr),
              "tail-scan");
        out.write("tail_high_freq.csv", csv.str());
      }
      if (all || tl_kind == "block-2d") {
        Text csv;
        check(gl_tail_block_2d_csv(tl_k, tl_s, tl_modes_2d, tl_samples, tl_common.seed,
                                   tl_levels.data(), tl_levels.size(), &csv.ptr),
              "tail-scan");
        out.write("tail_block_2d.csv", csv.str());
      }
      out.write("run.json", run_record(tl_cmd).dump(2) + "\n");
    } else if (bt_cmd->parsed()) {
      const OutputDir out(bt_common.output);
      write_provenance(bt_cmd, out);
      gl_bessel_table* table = nullptr;
      check(gl_bessel_table_create(bt_count, &table), "bessel-table");
      std::unique_ptr<gl_bessel_table, void (*)(gl_bessel_table*)> guard(table,
                                                                         gl_bessel_table_free);
      Text csv;
      check(gl_bessel_table_csv(table, &csv.ptr), "bessel-table");
      out.write("bessel_zeros.csv", csv.str());
      out.write("run.json", run_record(bt_cmd).dump(2) + "\n");
    } else if (pt_cmd->parsed()) {
      if (pt_ens.p % 2 != 0 || pt_ens.p < 4) return usage(pt_cmd, "--p must be an even integer >= 4");
      resolve_seed(pt_cmd, pt_common);
      const OutputDir out(pt_common.output);
      write_provenance(pt_cmd, out);
      auto cfg = ensemble_config(pt_ens, pt_K, pt_modes, pt_samples, pt_common.seed);
      cfg.resolution = pt_resolution;
      cfg.calibration = pt_calibration ? 1 : 0;
      gl_partition_report report;
      Text json;
      check(gl_partition_estimate(&cfg, &report, &json.ptr), "partition");
      auto doc = nlohmann::json::parse(json.str());
      doc["run"] = run_record(pt_cmd);
      out.write("partition.json", doc.dump(2) + "\n");
      std::printf("Z = %.10g +- %.3g (log Z = %.10g, ESS = %.1f)\n", report.estimate,
                  report.standard_error, report.log_estimate, report.effective_sample_size);
    } else if (vf_cmd->parsed()) {
      const OutputDir out(vf_common.output);
      write_provenance(vf_cmd, out);
      std::vector<const char*> faults;
      for (const auto& f : vf_faults) faults.push_back(f.c_str());
      gl_verify_report* report = nullptr;
      const gl_status st = gl_verify_run(faults.data(), faults.size(), &report);
      if (st == GL_ERR_INVALID_ARGUMENT) return usage(vf_cmd, gl_last_error());
      check(st, "verify");
      std::unique_ptr<gl_verify_report, void (*)(gl_verify_report*)> guard(report, gl_verify_free);
      for (std::size_t i = 0; i < gl_verify_count(report); ++i) {
        const char *module = nullptr, *name = nullptr;
        int passed = 0;
        double seconds = 0;
        check(gl_verify_check(report, i, &module, &name, &passed, &seconds), "verify");
        std::printf("%s %s.%s (%.2f s)\n", passed ? "PASS" : "FAIL", module, name, seconds);
      }
      Text xml;
      check(gl_verify_junit(report, &xml.ptr), "verify");
      out.write("verify.xml", xml.str());
      const bool ok = gl_verify_passed(report) != 0;
      std::printf("%s\n", ok ? "verify: all invariants hold" : "verify: FAILED");
      return ok ? 0 : 1;
    }
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
