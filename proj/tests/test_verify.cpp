// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "gibbslab/error.hpp"
#include "gibbslab/records.hpp"
#include "gibbslab/verify.hpp"

using namespace gibbslab;

TEST_CASE("shortest round-trip formatting") {
  CHECK(format_double(0.9) == "0.9");
  CHECK(format_double(0.75) == "0.75");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(std::isnan(std::stod("nan")));
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-17})
    CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("RFC 4180 quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  std::string out;
  csv_row(out, {"x", "1,2", "line\nbreak"});
  CHECK(out == "x,\"1,2\",\"line\nbreak\"\r\n");
}

TEST_CASE("JUnit document") {
  std::vector<JUnitCase> cases(2);
  cases[0].classname = "m";
  cases[0].name = "a<b";
  cases[1].classname = "m";
  cases[1].name = "c";
  cases[1].passed = false;
  cases[1].message = "x & y";
  cases[1].properties = {{"value", "1.5"}};
  const auto xml = junit_xml("suite", cases);
  CHECK(xml.find("tests=\"2\" failures=\"1\"") != std::string::npos);
  CHECK(xml.find("name=\"a&lt;b\"") != std::string::npos);
  CHECK(xml.find("<failure message=\"x &amp; y\"/>") != std::string::npos);
  CHECK(xml.find("<property name=\"value\" value=\"1.5\"/>") != std::string::npos);
}

TEST_CASE("unknown faults are rejected") {
  VerifyOptions opts;
  opts.faults = {"no-such-fault"};
  CHECK_THROWS_AS(run_verify(opts), Error);
  CHECK(known_faults().size() == 1);
}
