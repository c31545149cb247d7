// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace gibbslab {

struct VerifyOptions {
  /// Named faults to inject; see known_faults().
  std::vector<std::string> faults;
};

/// Fault names accepted by run_verify.
std::vector<std::string> known_faults();

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string message;
  std::vector<std::pair<std::string, double>> measured;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  std::vector<std::string> faults;
  bool passed() const;
};

/// Runs every module's invariant checks at fixed seeds and sizes.
VerifyReport run_verify(const VerifyOptions& options = {});

std::string to_junit(const VerifyReport& report);

}  // namespace gibbslab
