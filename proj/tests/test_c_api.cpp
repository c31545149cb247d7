// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include "gibbslab/gibbslab.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  gl_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(gl_version()).size() > 0);
  CHECK(std::string(gl_status_name(GL_ERR_NUMERICAL)) == "numerical");
  gl_string_free(nullptr);
}

TEST_CASE("ground state handle") {
  gl_ground_state* gs = nullptr;
  REQUIRE(gl_ground_state_solve(1, 6, &gs) == GL_OK);
  gl_ground_state_info info;
  REQUIRE(gl_ground_state_info_get(gs, &info) == GL_OK);
  CHECK(std::abs(info.mass * info.mass / (std::sqrt(3.0) * std::numbers::pi) - 1.0) < 1e-8);
  CHECK(info.dim == 1);
  char* csv = nullptr;
  REQUIRE(gl_ground_state_profile_csv(gs, &csv) == GL_OK);
  CHECK(take(csv).rfind("x,phi\r\n", 0) == 0);
  char* json = nullptr;
  REQUIRE(gl_ground_state_summary_json(gs, &json) == GL_OK);
  CHECK(take(json).find("\"mass\"") != std::string::npos);
  gl_ground_state_free(gs);
}

TEST_CASE("errors set the thread-local message") {
  gl_ground_state* gs = reinterpret_cast<gl_ground_state*>(0x1);
  CHECK(gl_ground_state_solve(1, 5, &gs) == GL_ERR_INVALID_ARGUMENT);
  CHECK(gs == nullptr);
  CHECK(std::strlen(gl_last_error()) > 0);
  CHECK(gl_ground_state_solve(1, 6, nullptr) == GL_ERR_INVALID_ARGUMENT);
  gl_ground_state_info info;
  CHECK(gl_ground_state_info_get(nullptr, &info) == GL_ERR_INVALID_ARGUMENT);
  gl_bessel_table* t = nullptr;
  REQUIRE(gl_bessel_table_create(3, &t) == GL_OK);
  CHECK(std::strlen(gl_last_error()) == 0);
  CHECK(gl_bessel_table_entry(t, 3, nullptr, nullptr) == GL_ERR_INVALID_ARGUMENT);
  gl_bessel_table_free(t);
}

TEST_CASE("Bessel table handle") {
  gl_bessel_table* t = nullptr;
  REQUIRE(gl_bessel_table_create(10, &t) == GL_OK);
  CHECK(gl_bessel_table_count(t) == 10);
  double z = 0, j1 = 0;
  REQUIRE(gl_bessel_table_entry(t, 0, &z, &j1) == GL_OK);
  CHECK(std::abs(z - 2.404825557695773) < 1e-12);
  CHECK(j1 > 0.5);
  char* csv = nullptr;
  REQUIRE(gl_bessel_table_csv(t, &csv) == GL_OK);
  CHECK(take(csv).rfind("n,z_n,J1_z_n\r\n", 0) == 0);
  gl_bessel_table_free(t);
}

TEST_CASE("partition and scan") {
  gl_ensemble_config cfg;
  gl_ensemble_config_default(&cfg);
  cfg.p = 4;
  cfg.K = 1.0;
  cfg.n_samples = 2000;
  gl_partition_report r;
  char* json = nullptr;
  REQUIRE(gl_partition_estimate(&cfg, &r, &json) == GL_OK);
  const std::string doc = take(json);
  CHECK(doc.find("\"config\"") != std::string::npos);
  CHECK(doc.find("\"version\"") != std::string::npos);
  CHECK(r.estimate > 0.0);
  CHECK(r.n_samples == 2000);
  cfg.n_modes = 1;
  cfg.resolution = 2;
  CHECK(gl_partition_estimate(&cfg, &r, nullptr) == GL_ERR_RESOLUTION);
  cfg.resolution = 0;

  const size_t schedule[] = {16, 32, 64};
  gl_scan* scan = nullptr;
  REQUIRE(gl_scan_run(&cfg, schedule, 3, &scan) == GL_OK);
  gl_scan_summary s;
  REQUIRE(gl_scan_summary_get(scan, &s) == GL_OK);
  CHECK(s.schedule_length == 3);
  CHECK(s.verdict == GL_VERDICT_STABLE);
  CHECK(std::string(gl_verdict_name(s.verdict)) == "stable");
  char* csv = nullptr;
  REQUIRE(gl_scan_csv(scan, &csv) == GL_OK);
  CHECK(take(csv).rfind("N,n_samples,log_estimate,stderr,fraction_inside_cutoff\r\n", 0) == 0);
  gl_scan_free(scan);
  const size_t bad[] = {32, 16};
  CHECK(gl_scan_run(&cfg, bad, 2, &scan) == GL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("tail curves") {
  gl_ensemble_config cfg;
  gl_ensemble_config_default(&cfg);
  cfg.p = 4;
  cfg.n_samples = 2000;
  const double levels[] = {0.0, 0.5, 1.0};
  char* csv = nullptr;
  REQUIRE(gl_tail_constrained_csv(&cfg, levels, 3, &csv) == GL_OK);
  CHECK(take(csv).rfind("level,empirical,err,theoretical,valid_flag\r\n", 0) == 0);
  const double pos[] = {0.5, 1.0};
  REQUIRE(gl_tail_high_freq_csv(3, 1.0 / 12.0, 6, 64, 500, 1, pos, 2, &csv) == GL_OK);
  take(csv);
  REQUIRE(gl_tail_block_2d_csv(3, 0.25, 32, 200, 1, pos, 2, &csv) == GL_OK);
  take(csv);
  const double unsorted[] = {1.0, 0.5};
  CHECK(gl_tail_high_freq_csv(3, 1.0 / 12.0, 6, 64, 100, 1, unsorted, 2, &csv) ==
        GL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("verify handle") {
  const char* faults[] = {"drop-j1-normalization"};
  gl_verify_report* report = nullptr;
  REQUIRE(gl_verify_run(faults, 1, &report) == GL_OK);
  CHECK(gl_verify_passed(report) == 0);
  bool parseval_failed = false;
  for (size_t i = 0; i < gl_verify_count(report); ++i) {
    const char *module = nullptr, *name = nullptr;
    int passed = 1;
    REQUIRE(gl_verify_check(report, i, &module, &name, &passed, nullptr) == GL_OK);
    if (std::string(name) == "gradient_parseval") parseval_failed = passed == 0;
    else CHECK(passed == 1);
  }
  CHECK(parseval_failed);
  char* xml = nullptr;
  REQUIRE(gl_verify_junit(report, &xml) == GL_OK);
  CHECK(take(xml).find("failures=\"1\"") != std::string::npos);
  gl_verify_free(report);
  const char* bogus[] = {"bogus"};
  CHECK(gl_verify_run(bogus, 1, &report) == GL_ERR_INVALID_ARGUMENT);
}
