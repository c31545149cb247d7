// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "gibbslab-cli-test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = "cd \"" + scratch().string() + "\" && \"" GIBBSLAB_CLI_PATH "\" " + args +
                          " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(slurp(p));
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

}  // namespace

TEST_CASE("ground-state summaries") {
  REQUIRE(run("ground-state --dim 1 --p 6 -o gs1") == 0);
  const auto s1 = nlohmann::json::parse(slurp(scratch() / "gs1/summary.json"));
  CHECK(std::abs(s1["mass_squared"].get<double>() / (std::sqrt(3.0) * std::numbers::pi) - 1.0) < 1e-8);
  CHECK(s1["run"]["version"].is_string());
  CHECK(fs::exists(scratch() / "gs1/profile.csv"));
  REQUIRE(run("ground-state --dim 2 --p 4 -o gs2") == 0);
  const auto s2 = nlohmann::json::parse(slurp(scratch() / "gs2/summary.json"));
  CHECK(s2["residual_max"].get<double>() < 1e-8);
}

TEST_CASE("malformed arguments exit with usage code 2") {
  CHECK(run("ground-state --dim 1 --p 5 -o bad") == 2);
  CHECK(run("threshold-scan --p 7 -o bad") == 2);
  CHECK(run("ground-state --dim 3 -o bad") == 2);
  CHECK(run("no-such-command") == 2);
  CHECK(run("verify --inject-fault bogus -o bad") == 2);
}

TEST_CASE("threshold-scan echoes the ratio grid") {
  REQUIRE(run("threshold-scan --p 6 --ratios 0.25,0.9,1.5 --schedule 16,32,64 --samples 500 -o ts") == 0);
  const auto rows = read_csv(scratch() / "ts/verdicts.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[0][0] == "ratio");
  CHECK(rows[1][0] == "0.25");
  CHECK(rows[2][0] == "0.9");
  CHECK(rows[3][0] == "1.5");
  CHECK(rows[3][2] == "diverging");
  const auto gs = nlohmann::json::parse(slurp(scratch() / "ts/ground_state.json"));
  CHECK(std::stod(rows[1][1]) == doctest::Approx(0.25 * gs["mass"].get<double>()).epsilon(1e-15));
  CHECK(fs::exists(scratch() / "ts/scan_ratio_0.9.csv"));
}

TEST_CASE("tail-scan rows are sorted, bounded and reproducible") {
  const std::string args = "tail-scan --samples 4000 --levels 1.0,0.25,0.5 ";
  REQUIRE(run(args + "-o tl") == 0);
  REQUIRE(run(args + "-o tl2") == 0);
  for (const char* name : {"tail_constrained.csv", "tail_high_freq.csv", "tail_block_2d.csv"}) {
    CAPTURE(name);
    const auto a = slurp(scratch() / "tl" / name);
    CHECK(a == slurp(scratch() / "tl2" / name));
    const auto rows = read_csv(scratch() / "tl" / name);
    REQUIRE(rows.size() >= 4);
    for (std::size_t i = 2; i < rows.size(); ++i) CHECK(std::stod(rows[i][0]) > std::stod(rows[i - 1][0]));
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i][4] != "1") continue;
      CHECK(std::stod(rows[i][3]) >= std::stod(rows[i][1]) - 3.0 * std::stod(rows[i][2]));
    }
  }
}

TEST_CASE("bessel-table and partition") {
  REQUIRE(run("bessel-table --count 100 -o bt") == 0);
  CHECK(read_csv(scratch() / "bt/bessel_zeros.csv").size() == 101);
  REQUIRE(run("partition --p 4 --K 1 --N 16 --samples 2000 -o pt") == 0);
  const auto doc = nlohmann::json::parse(slurp(scratch() / "pt/partition.json"));
  CHECK(doc["config"]["n_modes"].get<int>() == 16);
  CHECK(doc["estimate"].get<double>() > 0.0);
}

TEST_CASE("results regenerate from the recorded config") {
  REQUIRE(run("partition --p 4 --K 0.8 --N 8 --samples 1000 --seed 5 -o regen") == 0);
  const auto first = slurp(scratch() / "regen/partition.json");
  fs::remove(scratch() / "regen/partition.json");
  REQUIRE(run("--config regen/config.ini") == 0);
  CHECK(slurp(scratch() / "regen/partition.json") == first);
  // CLI values override the file
  REQUIRE(run("--config regen/config.ini partition --samples 500 -o regen2") == 0);
  const auto doc = nlohmann::json::parse(slurp(scratch() / "regen2/partition.json"));
  CHECK(doc["n_samples"].get<int>() == 500);
  CHECK(doc["config"]["seed"].get<int>() == 5);
}

TEST_CASE("random seeds are recorded") {
  REQUIRE(run("partition --p 4 --N 4 --samples 200 --random-seed -o rs") == 0);
  const auto cfg = slurp(scratch() / "rs/config.ini");
  CHECK(cfg.find("seed=20260101") == std::string::npos);
  CHECK(cfg.find("random") == std::string::npos);
}

TEST_CASE("outputs stay inside the output directory") {
  const auto sandbox = scratch() / "confined";
  fs::create_directories(sandbox);
  REQUIRE(run("bessel-table --count 5 -o confined/out") == 0);
  std::vector<std::string> entries;
  for (const auto& e : fs::directory_iterator(sandbox)) entries.push_back(e.path().filename().string());
  CHECK(entries == std::vector<std::string>{"out"});
}
