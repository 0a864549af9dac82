#ifndef KPLANE_REPORT_HPP
#define KPLANE_REPORT_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "kplane/errors.hpp"
#include "kplane/quadrature.hpp"
#include "kplane/version.hpp"

namespace kplane {

struct CheckRecord {
  std::string check;
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_error = 0.0;
  double margin = 0.0;
  double tail_bound = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string message;
  double runtime_ms = 0.0;
};

struct VerificationReport {
  std::string scenario;
  QuadratureRule rule;
  int grid_res = 0;
  std::vector<CheckRecord> checks;

  bool overall_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

namespace detail {

// Reports promise finite numbers; a NaN leaking into one is a library bug,
// not a check failure, so it surfaces as an internal error.
inline std::string fmt_number(double v) {
  if (!std::isfinite(v)) throw Error("report contains a non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

}  // namespace detail

// Stable field order and 12 significant digits: two runs of the same scenario
// at the same version produce byte-identical documents except runtime_ms.
inline std::string report_to_json(const VerificationReport& r) {
  using detail::fmt_number;
  using detail::json_escape;
  std::string out;
  out += "{\n";
  out += "  \"schema_version\": 1,\n";
  out += "  \"tool_version\": \"" + std::string(version_string) + "\",\n";
  out += "  \"scenario\": \"" + json_escape(r.scenario) + "\",\n";
  out += "  \"quadrature\": {\n";
  out += "    \"order\": " + std::to_string(r.rule.order) + ",\n";
  out += "    \"plane_trunc_radius\": " + fmt_number(r.rule.plane_trunc_radius) + ",\n";
  out += "    \"plane_points_per_axis\": " + std::to_string(r.rule.plane_points_per_axis) + ",\n";
  out += "    \"window\": \"" + json_escape(r.rule.window) + "\"\n";
  out += "  },\n";
  out += "  \"grid_res\": " + std::to_string(r.grid_res) + ",\n";
  out += std::string("  \"overall_pass\": ") + (r.overall_pass() ? "true" : "false") + ",\n";
  out += "  \"checks\": [";
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    const CheckRecord& c = r.checks[i];
    out += i == 0 ? "\n" : ",\n";
    out += "    {\n";
    out += "      \"check\": \"" + json_escape(c.check) + "\",\n";
    out += "      \"lhs\": " + fmt_number(c.lhs) + ",\n";
    out += "      \"rhs\": " + fmt_number(c.rhs) + ",\n";
    out += "      \"rel_error\": " + fmt_number(c.rel_error) + ",\n";
    out += "      \"margin\": " + fmt_number(c.margin) + ",\n";
    out += "      \"tail_bound\": " + fmt_number(c.tail_bound) + ",\n";
    out += "      \"tolerance\": " + fmt_number(c.tolerance) + ",\n";
    out += std::string("      \"pass\": ") + (c.pass ? "true" : "false") + ",\n";
    out += "      \"message\": \"" + json_escape(c.message) + "\",\n";
    out += "      \"runtime_ms\": " + fmt_number(c.runtime_ms) + "\n";
    out += "    }";
  }
  out += r.checks.empty() ? "]\n" : "\n  ]\n";
  out += "}\n";
  return out;
}

inline std::string report_to_table(const VerificationReport& r) {
  std::string out;
  out += "scenario: " + r.scenario + "  (tool " + std::string(version_string) + ")\n";
  out += "quadrature: order " + std::to_string(r.rule.order) + ", radius " +
         detail::fmt_number(r.rule.plane_trunc_radius) + ", " +
         std::to_string(r.rule.plane_points_per_axis) + " points/axis, window " + r.rule.window +
         ", grid_res " + std::to_string(r.grid_res) + "\n\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-36s %6s %12s %12s %10s %10s\n", "check", "pass",
                "rel_error", "tolerance", "margin", "ms");
  out += line;
  out += std::string(90, '-') + "\n";
  for (const auto& c : r.checks) {
    std::snprintf(line, sizeof(line), "%-36s %6s %12.4g %12.4g %10.4g %10.1f\n", c.check.c_str(),
                  c.pass ? "pass" : "FAIL", c.rel_error, c.tolerance, c.margin, c.runtime_ms);
    out += line;
    if (!c.message.empty()) out += "    note: " + c.message + "\n";
  }
  out += "\noverall: " + std::string(r.overall_pass() ? "pass" : "FAIL") + "\n";
  return out;
}

inline void write_report(const VerificationReport& r, const std::string& format,
                         const std::string& out_path) {
  std::string text;
  if (format == "json")
    text = report_to_json(r);
  else if (format == "table")
    text = report_to_table(r);
  else
    throw ValidationError("unknown report format '" + format + "'");
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error("cannot open '" + out_path + "' for writing");
  out << text;
  if (!out.good()) throw Error("failed writing report to '" + out_path + "'");
}

}  // namespace kplane

#endif
