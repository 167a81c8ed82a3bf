#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pocketeval {

// One docking-engine energy for one generated molecule. mode is one of
// "score" (score-only rescoring of the generated pose), "min" (local
// optimization), "dock" (full redocking).
struct AffinityRecord {
  std::string pocket_id;
  int ordinal = 0;  // 1-based position of the molecule within its pocket set
  std::string mode;
  double energy = 0;  // kcal/mol, valid when <= 0
};

struct AffinityTable {
  std::vector<AffinityRecord> records;
  std::vector<std::string> issues;

  std::optional<double> find(const std::string& pocket_id, int ordinal,
                             const std::string& mode) const;
};

// CSV with header "pocket_id,ordinal,mode,energy". Malformed rows land in
// issues; a wrong header throws Error.
AffinityTable parse_scores_csv(const std::string& text);
std::string write_scores_csv(const AffinityTable& table);

struct AffinitySummary {
  std::optional<double> mean_energy;  // over valid (<= 0) energies only
  double improvement_pct = 0;         // generated strictly better than reference
  int present = 0;                    // records with an energy at all
  int valid = 0;                      // energy <= 0
};

// Per-mode summary against one reference energy per pocket. Positive
// generated energies stay in the improvement denominator but never enter
// the mean. Missing reference for a pocket drops that pocket with a warning.
AffinitySummary summarize_mode(std::span<const AffinityRecord> records,
                               const std::map<std::string, double>& reference_energy,
                               std::vector<std::string>* warnings);

// Mean percent binding gap: per pocket, mean over that pocket's valid
// generated energies of (E_gen - E_ref) / E_ref * 100, then the mean over
// pockets. Requires E_ref < 0; pockets violating that are skipped with a
// warning. Empty result -> nullopt.
std::optional<double> mean_percent_binding_gap(std::span<const AffinityRecord> records,
                                               const std::map<std::string, double>& reference_energy,
                                               std::vector<std::string>* warnings);

// Ligand binding efficiency -E / n_heavy, pooled over all valid records with
// a known heavy-atom count. Records lacking a size are skipped with a warning.
std::optional<double> mean_ligand_efficiency(std::span<const AffinityRecord> records,
                                             const std::map<std::pair<std::string, int>, int>& heavy_atoms,
                                             std::vector<std::string>* warnings);

}  // namespace pocketeval
