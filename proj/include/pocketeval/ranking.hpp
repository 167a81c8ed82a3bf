#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pocketeval/report.hpp"

namespace pocketeval {

enum class RankDirection { LowerBetter, HigherBetter };
enum class TieMode { Average, Dense, Min };

// Competition ranks over the present values; a method with no value (or NaN)
// takes the worst rank N outright, where N is the total method count.
std::map<std::string, double> rank_metric(
    const std::map<std::string, std::optional<double>>& values, RankDirection direction,
    TieMode tie = TieMode::Average);

// Range-membership ranking (used for LogP): inside [lo, hi] is rank 1,
// outside (or absent) rank 2. With averaged=true the two groups instead get
// the tie-averaged ranks of their positions.
std::map<std::string, double> rank_by_range(
    const std::map<std::string, std::optional<double>>& values, double lo, double hi,
    bool averaged = false);

double aspect_score(double weight, int method_count, double mean_rank);

struct LeaderboardWeights {
  double substructure = 0.2;
  double chemical = 0.2;
  double interaction = 0.4;
  double geometry = 0.2;
  double of(const std::string& aspect) const;
};

struct MetricColumn {
  std::string aspect;
  std::string id;
  RankDirection direction = RankDirection::LowerBetter;
  bool range_rule = false;  // rank_by_range instead of rank_metric
};

// Every leaderboard metric in protocol order with its ranking direction.
const std::vector<MetricColumn>& leaderboard_columns();

struct LeaderboardRow {
  std::string method;
  std::map<std::string, double> metric_rank;       // by metric id
  std::map<std::string, double> aspect_mean_rank;  // by aspect
  std::map<std::string, double> aspect_value;      // weight * (N - mean rank)
  double total_score = 0;
  int final_rank = 0;
};

struct Leaderboard {
  std::vector<LeaderboardRow> rows;  // sorted by final_rank, then method name
  std::vector<std::string> warnings;
};

// Rank one report per method across all columns. A metric missing from a
// report is ranked worst for that method; a column absent from every report
// is dropped with a warning so it cannot dilute the aspect means.
Leaderboard rank_leaderboard(std::span<const MetricReport> reports,
                             const LeaderboardWeights& weights = {},
                             TieMode tie = TieMode::Average,
                             bool logp_range_averaged = false);

// method,aspect columns,total,rank table; stable byte-for-byte for a given
// leaderboard.
std::string write_leaderboard_csv(const Leaderboard& board);

}  // namespace pocketeval
