// Copyright 2026 The gibbslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "gibbslab/records.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace gibbslab {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void csv_row(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_field(fields[i]);
  }
  out += "\r\n";
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string junit_xml(const std::string& suite_name,
                      const std::vector<JUnitCase>& cases) {
  std::size_t failures = 0;
  double total = 0.0;
  for (const auto& c : cases) {
    failures += c.passed ? 0 : 1;
    total += c.seconds;
  }
  char time_buf[32];
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  std::snprintf(time_buf, sizeof time_buf, "%.3f", total);
  out += "<testsuites>\n  <testsuite name=\"" + xml_escape(suite_name) + "\" tests=\"" +
         std::to_string(cases.size()) + "\" failures=\"" + std::to_string(failures) +
         "\" errors=\"0\" time=\"" + time_buf + "\">\n";
  for (const auto& c : cases) {
    std::snprintf(time_buf, sizeof time_buf, "%.3f", c.seconds);
    out += "    <testcase classname=\"" + xml_escape(c.classname) + "\" name=\"" +
           xml_escape(c.name) + "\" time=\"" + time_buf + "\">\n";
    if (!c.properties.empty()) {
      out += "      <properties>\n";
      for (const auto& [k, v] : c.properties)
        out += "        <property name=\"" + xml_escape(k) + "\" value=\"" + xml_escape(v) +
               "\"/>\n";
      out += "      </properties>\n";
    }
    if (!c.passed)
      out += "      <failure message=\"" + xml_escape(c.message) + "\"/>\n";
    out += "    </testcase>\n";
  }
  out += "  </testsuite>\n</testsuites>\n";
  return out;
}

}  // namespace gibbslab
