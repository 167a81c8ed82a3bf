#include "pocketeval/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pocketeval/common.hpp"

namespace pocketeval {

namespace {

bool usable(const std::optional<double>& v) { return v.has_value() && std::isfinite(*v); }

}  // namespace

std::map<std::string, double> rank_metric(
    const std::map<std::string, std::optional<double>>& values, RankDirection direction,
    TieMode tie) {
  const int n = int(values.size());
  std::map<std::string, double> ranks;
  // Present values sorted best-first; the map order makes ties deterministic.
  std::vector<std::pair<double, std::string>> present;
  for (const auto& [method, v] : values) {
    if (usable(v)) {
      present.push_back({direction == RankDirection::LowerBetter ? *v : -*v, method});
    } else {
      ranks[method] = double(n);  // absent or NaN: worst rank outright
    }
  }
  std::stable_sort(present.begin(), present.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  size_t i = 0;
  int dense_rank = 0;
  while (i < present.size()) {
    size_t j = i;
    while (j < present.size() && present[j].first == present[i].first) ++j;
    ++dense_rank;
    double rank;
    switch (tie) {
      case TieMode::Average: rank = (double(i + 1) + double(j)) / 2.0; break;
      case TieMode::Dense: rank = double(dense_rank); break;
      case TieMode::Min: rank = double(i + 1); break;
      default: rank = double(i + 1); break;
    }
    for (size_t k = i; k < j; ++k) ranks[present[k].second] = rank;
    i = j;
  }
  return ranks;
}

std::map<std::string, double> rank_by_range(
    const std::map<std::string, std::optional<double>>& values, double lo, double hi,
    bool averaged) {
  std::map<std::string, double> ranks;
  int inside = 0;
  for (const auto& [method, v] : values) {
    if (usable(v) && *v >= lo && *v <= hi) ++inside;
  }
  const int n = int(values.size());
  // Literal group labels by default; tie-averaged positions on request.
  double in_rank = 1.0, out_rank = 2.0;
  if (averaged) {
    in_rank = inside > 0 ? (1.0 + inside) / 2.0 : 0.0;
    out_rank = (double(inside + 1) + double(n)) / 2.0;
  }
  for (const auto& [method, v] : values) {
    ranks[method] = (usable(v) && *v >= lo && *v <= hi) ? in_rank : out_rank;
  }
  return ranks;
}

double aspect_score(double weight, int method_count, double mean_rank) {
  return weight * (double(method_count) - mean_rank);
}

double LeaderboardWeights::of(const std::string& aspect) const {
  if (aspect == "substructure") return substructure;
  if (aspect == "chemical") return chemical;
  if (aspect == "interaction") return interaction;
  if (aspect == "geometry") return geometry;
  throw Error("unknown aspect '" + aspect + "'");
}

const std::vector<MetricColumn>& leaderboard_columns() {
  using D = RankDirection;
  static const std::vector<MetricColumn> cols = {
      {"substructure", "jsd_at", D::LowerBetter, false},
      {"substructure", "mae_at", D::LowerBetter, false},
      {"substructure", "jsd_rt", D::LowerBetter, false},
      {"substructure", "mae_rt", D::LowerBetter, false},
      {"substructure", "jsd_fg", D::LowerBetter, false},
      {"substructure", "mae_fg", D::LowerBetter, false},
      {"chemical", "qed", D::HigherBetter, false},
      {"chemical", "logp", D::LowerBetter, true},
      {"chemical", "sa", D::HigherBetter, false},
      {"chemical", "lpsk", D::HigherBetter, false},
      {"interaction", "vina_score_e", D::LowerBetter, false},
      {"interaction", "vina_score_imp", D::HigherBetter, false},
      {"interaction", "vina_min_e", D::LowerBetter, false},
      {"interaction", "vina_min_imp", D::HigherBetter, false},
      {"interaction", "vina_dock_e", D::LowerBetter, false},
      {"interaction", "vina_dock_imp", D::HigherBetter, false},
      {"interaction", "mpbg", D::HigherBetter, false},
      {"interaction", "lbe", D::HigherBetter, false},
      {"interaction", "jsd_oa", D::LowerBetter, false},
      {"interaction", "mae_oa", D::LowerBetter, false},
      {"interaction", "jsd_pp", D::LowerBetter, false},
      {"interaction", "mae_pp", D::LowerBetter, false},
      {"geometry", "jsd_bl", D::LowerBetter, false},
      {"geometry", "jsd_ba", D::LowerBetter, false},
      {"geometry", "ratio_cca", D::LowerBetter, false},
      {"geometry", "ratio_cm", D::LowerBetter, false},
  };
  return cols;
}

// LogP occupies a drug-likeness window rather than a monotone scale.
static constexpr double kLogpLo = -0.4;
static constexpr double kLogpHi = 5.6;

Leaderboard rank_leaderboard(std::span<const MetricReport> reports,
                             const LeaderboardWeights& weights, TieMode tie,
                             bool logp_range_averaged) {
  Leaderboard board;
  if (reports.empty()) throw Error("leaderboard over zero reports");
  const int n = int(reports.size());

  std::map<std::string, LeaderboardRow> rows;
  for (const auto& r : reports) {
    if (r.method.empty()) throw Error("report without a method name");
    if (rows.count(r.method)) throw Error("duplicate method '" + r.method + "'");
    rows[r.method].method = r.method;
  }

  // aspect -> (method -> (rank sum, column count))
  std::map<std::string, std::map<std::string, std::pair<double, int>>> per_aspect;

  for (const auto& col : leaderboard_columns()) {
    std::map<std::string, std::optional<double>> values;
    bool any = false;
    for (const auto& r : reports) {
      const auto& m = r.aspect(col.aspect);
      auto it = m.find(col.id);
      if (it != m.end() && std::isfinite(it->second)) {
        values[r.method] = it->second;
        any = true;
      } else {
        values[r.method] = std::nullopt;
      }
    }
    if (!any) {
      board.warnings.push_back("metric " + col.id + " is absent from every report; column dropped");
      continue;
    }
    auto ranks = col.range_rule ? rank_by_range(values, kLogpLo, kLogpHi, logp_range_averaged)
                                : rank_metric(values, col.direction, tie);
    for (const auto& [method, rank] : ranks) {
      rows[method].metric_rank[col.id] = rank;
      auto& acc = per_aspect[col.aspect][method];
      acc.first += rank;
      acc.second += 1;
    }
  }

  for (auto& [method, row] : rows) {
    double total = 0;
    for (const char* aspect : kAspects) {
      auto ai = per_aspect.find(aspect);
      if (ai == per_aspect.end()) continue;  // every column of the aspect dropped
      const auto& acc = ai->second.at(method);
      double mean = acc.first / double(acc.second);
      row.aspect_mean_rank[aspect] = mean;
      row.aspect_value[aspect] = aspect_score(weights.of(aspect), n, mean);
      total += row.aspect_value[aspect];
    }
    row.total_score = total;
  }

  // Final order: higher total first, method name breaking exact ties.
  board.rows.reserve(rows.size());
  for (auto& [method, row] : rows) board.rows.push_back(std::move(row));
  std::sort(board.rows.begin(), board.rows.end(), [](const auto& a, const auto& b) {
    if (a.total_score != b.total_score) return a.total_score > b.total_score;
    return a.method < b.method;
  });
  for (size_t i = 0; i < board.rows.size(); ++i) {
    if (i > 0 && board.rows[i].total_score == board.rows[i - 1].total_score) {
      board.rows[i].final_rank = board.rows[i - 1].final_rank;
    } else {
      board.rows[i].final_rank = int(i) + 1;
    }
  }
  return board;
}

std::string write_leaderboard_csv(const Leaderboard& board) {
  std::string out = "method,substructure,chemical,interaction,geometry,total,rank\n";
  char buf[64];
  for (const auto& row : board.rows) {
    out += row.method;
    for (const char* aspect : kAspects) {
      auto it = row.aspect_value.find(aspect);
      if (it == row.aspect_value.end()) {
        out += ",";
      } else {
        std::snprintf(buf, sizeof buf, ",%.4f", it->second);
        out += buf;
      }
    }
    std::snprintf(buf, sizeof buf, ",%.4f,%d\n", row.total_score, row.final_rank);
    out += buf;
  }
  return out;
}

}  // namespace pocketeval
