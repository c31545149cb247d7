// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gibbslab {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// RFC-4180 field quoting: fields holding a comma, quote, CR or LF are
/// wrapped in quotes with embedded quotes doubled.
std::string csv_field(std::string_view text);

/// Appends one CRLF-terminated record.
void csv_row(std::string& out, const std::vector<std::string>& fields);

std::string xml_escape(std::string_view text);

struct JUnitCase {
  std::string classname;
  std::string name;
  double seconds = 0.0;
  bool passed = true;
  std::string message;  // failure message
  std::vector<std::pair<std::string, std::string>> properties;
};

std::string junit_xml(const std::string& suite_name,
                      const std::vector<JUnitCase>& cases);

}  // namespace gibbslab
