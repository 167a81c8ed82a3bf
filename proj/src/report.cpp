#include "pocketeval/report.hpp"

#include <algorithm>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "pocketeval/common.hpp"

namespace pocketeval {
namespace {

const std::vector<std::string> kSubstructureOrder = {"jsd_at", "mae_at", "jsd_rt",
                                                     "mae_rt", "jsd_fg", "mae_fg"};
const std::vector<std::string> kChemicalOrder = {"qed", "logp", "sa", "lpsk"};
const std::vector<std::string> kInteractionOrder = {
    "vina_score_e", "vina_score_imp", "vina_min_e", "vina_min_imp",
    "vina_dock_e",  "vina_dock_imp",  "mpbg",       "lbe",
    "jsd_oa",       "mae_oa",         "jsd_pp",     "mae_pp"};
const std::vector<std::string> kGeometryOrder = {"jsd_bl", "jsd_ba", "ratio_cca", "ratio_cm"};

std::string fmt4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
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

// Keys in protocol order first, any extras lexicographically after.
std::vector<std::string> ordered_keys(const std::map<std::string, double>& values,
                                      const std::vector<std::string>& order) {
  std::vector<std::string> keys;
  for (const auto& k : order) {
    if (values.count(k)) keys.push_back(k);
  }
  for (const auto& [k, v] : values) {
    (void)v;
    if (std::find(order.begin(), order.end(), k) == order.end()) keys.push_back(k);
  }
  return keys;
}

void emit_object(std::string& out, const std::map<std::string, double>& values,
                 const std::vector<std::string>& order, int indent) {
  std::string pad(indent, ' ');
  out += "{\n";
  auto keys = ordered_keys(values, order);
  for (size_t i = 0; i < keys.size(); ++i) {
    out += pad + "  \"" + json_escape(keys[i]) + "\": " + fmt4(values.at(keys[i]));
    out += (i + 1 < keys.size()) ? ",\n" : "\n";
  }
  out += pad + "}";
}

}  // namespace

const std::map<std::string, double>& MetricReport::aspect(std::string_view name) const {
  if (name == "substructure") return substructure;
  if (name == "chemical") return chemical;
  if (name == "interaction") return interaction;
  if (name == "geometry") return geometry;
  throw Error("unknown aspect '" + std::string(name) + "'");
}

std::map<std::string, double>& MetricReport::aspect(std::string_view name) {
  return const_cast<std::map<std::string, double>&>(
      static_cast<const MetricReport*>(this)->aspect(name));
}

bool MetricReport::any_aspect_present() const {
  return !substructure.empty() || !chemical.empty() || !interaction.empty() || !geometry.empty();
}

const std::vector<std::string>& aspect_metric_order(std::string_view aspect) {
  if (aspect == "substructure") return kSubstructureOrder;
  if (aspect == "chemical") return kChemicalOrder;
  if (aspect == "interaction") return kInteractionOrder;
  if (aspect == "geometry") return kGeometryOrder;
  throw Error("unknown aspect '" + std::string(aspect) + "'");
}

std::string write_report(const MetricReport& report, ReportFormat format) {
  if (!report.any_aspect_present()) {
    throw Error("report has no completed aspect, nothing to serialize");
  }
  std::string out;
  if (format == ReportFormat::Json) {
    out += "{\n";
    out += "  \"method\": \"" + json_escape(report.method) + "\"";
    for (const char* aspect : kAspects) {
      const auto& values = report.aspect(aspect);
      if (values.empty()) continue;
      out += ",\n  \"" + std::string(aspect) + "\": ";
      emit_object(out, values, aspect_metric_order(aspect), 2);
    }
    if (!report.summary.empty()) {
      out += ",\n  \"summary\": ";
      emit_object(out, report.summary, {}, 2);
    }
    if (!report.warnings.empty()) {
      out += ",\n  \"warnings\": [\n";
      for (size_t i = 0; i < report.warnings.size(); ++i) {
        out += "    \"" + json_escape(report.warnings[i]) + "\"";
        out += (i + 1 < report.warnings.size()) ? ",\n" : "\n";
      }
      out += "  ]";
    }
    out += "\n}\n";
  } else {
    out += "method,aspect,metric,value\n";
    for (const char* aspect : kAspects) {
      const auto& values = report.aspect(aspect);
      for (const auto& key : ordered_keys(values, aspect_metric_order(aspect))) {
        out += report.method + "," + aspect + "," + key + "," + fmt4(values.at(key)) + "\n";
      }
    }
    for (const auto& key : ordered_keys(report.summary, {})) {
      out += report.method + ",summary," + key + "," + fmt4(report.summary.at(key)) + "\n";
    }
  }
  return out;
}

MetricReport read_report_json(std::string_view text) {
  MetricReport report;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("report is not valid JSON: ") + e.what());
  }
  if (doc.contains("method")) report.method = doc["method"].get<std::string>();
  for (const char* aspect : kAspects) {
    if (!doc.contains(aspect)) continue;
    for (const auto& [k, v] : doc[aspect].items()) {
      report.aspect(aspect)[k] = v.get<double>();
    }
  }
  if (doc.contains("summary")) {
    for (const auto& [k, v] : doc["summary"].items()) report.summary[k] = v.get<double>();
  }
  if (doc.contains("warnings")) {
    for (const auto& w : doc["warnings"]) report.warnings.push_back(w.get<std::string>());
  }
  return report;
}

}  // namespace pocketeval
