#include "pocketeval/affinity.hpp"

#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "pocketeval/common.hpp"

namespace pocketeval {

namespace {

bool known_mode(const std::string& mode) {
  return mode == "score" || mode == "min" || mode == "dock";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cols;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    cols.push_back(line.substr(start, comma == std::string::npos ? std::string::npos
                                                                 : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cols;
}

}  // namespace

std::optional<double> AffinityTable::find(const std::string& pocket_id, int ordinal,
                                          const std::string& mode) const {
  for (const auto& r : records) {
    if (r.ordinal == ordinal && r.pocket_id == pocket_id && r.mode == mode) return r.energy;
  }
  return std::nullopt;
}

AffinityTable parse_scores_csv(const std::string& text) {
  AffinityTable out;
  std::istringstream in{text};
  std::string line;
  if (!std::getline(in, line)) throw Error("scores csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "pocket_id,ordinal,mode,energy") {
    throw Error("scores csv: expected header 'pocket_id,ordinal,mode,energy'");
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cols = split_csv(line);
    if (cols.size() != 4) {
      out.issues.push_back("line " + std::to_string(line_no) + ": wrong column count");
      continue;
    }
    char* end = nullptr;
    long ordinal = std::strtol(cols[1].c_str(), &end, 10);
    if (cols[1].empty() || end != cols[1].c_str() + cols[1].size() || ordinal < 1) {
      out.issues.push_back("line " + std::to_string(line_no) + ": bad ordinal '" + cols[1] + "'");
      continue;
    }
    if (!known_mode(cols[2])) {
      out.issues.push_back("line " + std::to_string(line_no) + ": unknown mode '" + cols[2] + "'");
      continue;
    }
    double energy = std::strtod(cols[3].c_str(), &end);
    if (cols[3].empty() || end != cols[3].c_str() + cols[3].size()) {
      out.issues.push_back("line " + std::to_string(line_no) + ": bad energy '" + cols[3] + "'");
      continue;
    }
    out.records.push_back({cols[0], int(ordinal), cols[2], energy});
  }
  return out;
}

std::string write_scores_csv(const AffinityTable& table) {
  std::string out = "pocket_id,ordinal,mode,energy\n";
  char buf[64];
  for (const auto& r : table.records) {
    std::snprintf(buf, sizeof buf, "%.10g", r.energy);
    out += r.pocket_id;
    out += ',';
    out += std::to_string(r.ordinal);
    out += ',';
    out += r.mode;
    out += ',';
    out += buf;
    out += '\n';
  }
  return out;
}

AffinitySummary summarize_mode(std::span<const AffinityRecord> records,
                               const std::map<std::string, double>& reference_energy,
                               std::vector<std::string>* warnings) {
  AffinitySummary s;
  s.present = int(records.size());
  double sum = 0;
  int improved = 0, comparable = 0;
  std::set<std::string> warned;
  for (const auto& r : records) {
    if (r.energy <= 0) {
      ++s.valid;
      sum += r.energy;
    }
    auto ref = reference_energy.find(r.pocket_id);
    if (ref == reference_energy.end()) {
      if (warnings && warned.insert(r.pocket_id).second) {
        warnings->push_back("affinity: no reference energy for pocket " + r.pocket_id +
                            ", its records are left out of the improvement rate");
      }
      continue;
    }
    ++comparable;
    if (r.energy < ref->second) ++improved;
  }
  if (s.valid > 0) s.mean_energy = sum / s.valid;
  s.improvement_pct = comparable > 0 ? 100.0 * improved / comparable : 0.0;
  return s;
}

std::optional<double> mean_percent_binding_gap(std::span<const AffinityRecord> records,
                                               const std::map<std::string, double>& reference_energy,
                                               std::vector<std::string>* warnings) {
  // Pocket mean of (E_gen - E_ref) / E_ref * 100 over valid energies, then
  // the unweighted mean over pockets. E_ref < 0 keeps the sign meaningful:
  // positive gap = generated binds tighter.
  std::map<std::string, std::pair<double, int>> per_pocket;  // sum, count
  std::set<std::string> warned;
  for (const auto& r : records) {
    if (r.energy > 0) continue;
    auto ref = reference_energy.find(r.pocket_id);
    if (ref == reference_energy.end()) {
      if (warnings && warned.insert(r.pocket_id).second) {
        warnings->push_back("mpbg: no reference energy for pocket " + r.pocket_id);
      }
      continue;
    }
    if (ref->second >= 0) {
      if (warnings && warned.insert(r.pocket_id).second) {
        warnings->push_back("mpbg: reference energy for pocket " + r.pocket_id +
                            " is not negative, pocket skipped");
      }
      continue;
    }
    auto& acc = per_pocket[r.pocket_id];
    acc.first += (r.energy - ref->second) / ref->second * 100.0;
    acc.second += 1;
  }
  if (per_pocket.empty()) return std::nullopt;
  double sum = 0;
  for (const auto& [pocket, acc] : per_pocket) sum += acc.first / acc.second;
  return sum / double(per_pocket.size());
}

std::optional<double> mean_ligand_efficiency(std::span<const AffinityRecord> records,
                                             const std::map<std::pair<std::string, int>, int>& heavy_atoms,
                                             std::vector<std::string>* warnings) {
  double sum = 0;
  int n = 0;
  for (const auto& r : records) {
    if (r.energy > 0) continue;
    auto it = heavy_atoms.find({r.pocket_id, r.ordinal});
    if (it == heavy_atoms.end() || it->second <= 0) {
      if (warnings) {
        warnings->push_back("lbe: no heavy-atom count for " + r.pocket_id + "#" +
                            std::to_string(r.ordinal));
      }
      continue;
    }
    sum += -r.energy / double(it->second);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

}  // namespace pocketeval
