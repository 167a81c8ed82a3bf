#pragma once

#include <map>
#include <string>
#include <vector>

#include "pocketeval/mol.hpp"

namespace pocketeval {

// Aspect names, fixed emission order.
inline constexpr const char* kAspects[4] = {"substructure", "chemical", "interaction", "geometry"};

struct MetricReport {
  std::string method;
  // metric id -> value, one map per aspect; a missing key means the metric is
  // absent (provider down, all-invalid energies, ...), never zero.
  std::map<std::string, double> substructure;
  std::map<std::string, double> chemical;
  std::map<std::string, double> interaction;
  std::map<std::string, double> geometry;
  std::map<std::string, double> summary;   // counts, validity ratio, ...
  std::vector<std::string> warnings;

  const std::map<std::string, double>& aspect(std::string_view name) const;
  std::map<std::string, double>& aspect(std::string_view name);
  bool any_aspect_present() const;
};

enum class ReportFormat { Json, Csv };

// Deterministic: metric keys emitted in protocol order (then leftovers
// lexicographically), values at 4 decimals. Throws Error when every aspect is
// empty. Same report in, byte-identical stream out.
std::string write_report(const MetricReport& report, ReportFormat format);

// Inverse of the JSON form, used by the report/rank commands.
MetricReport read_report_json(std::string_view text);

// Protocol order of metric ids within an aspect (report emission and the
// leaderboard column order both follow it).
const std::vector<std::string>& aspect_metric_order(std::string_view aspect);

}  // namespace pocketeval
