#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pocketeval/mol.hpp"

namespace pocketeval {

struct ChemProfile {
  std::optional<double> qed;  // external provider; absent when not configured
  std::optional<double> sa;   // normalized variant, [0,1]
  double logp = 0;
  int lpsk = 0;
  double mol_weight = 0;  // includes implicit hydrogens
  int hbd = 0;
  int hba = 0;
  int rot_bonds = 0;
};

// Wildman-Crippen style atom-contribution LogP from the table shipped in
// chemprops.cpp. Atoms with no matching class fall to their element default;
// the optional warning sink collects those events. Aromaticity must be
// perceived. Throws Error on an empty molecule.
double crippen_logp(const MoleculeGraph& mol, std::vector<std::string>* warnings = nullptr);

// Count of satisfied criteria: MW <= 500, LogP <= 5, HBD <= 5, HBA <= 10,
// rotatable bonds <= 10.
int lipinski_count(double mol_weight, double logp, int hbd, int hba, int rot_bonds);

// Closed interval [-0.4, 5.6].
bool logp_in_drug_range(double logp);

// N/O bearing at least one hydrogen (explicit or implicit).
int hbd_count(const MoleculeGraph& mol);
// All N/O atoms.
int hba_count(const MoleculeGraph& mol);
// Heavy atoms plus implicit and explicit hydrogens.
double molecular_weight(const MoleculeGraph& mol);

// Everything except qed/sa.
ChemProfile chem_profile(const MoleculeGraph& mol, std::vector<std::string>* warnings = nullptr);

// Property provider join: ordinal -> (qed, sa). Ordinals are 1-based record
// ordinals, matching SDF record numbering. Two accepted headers:
// "ordinal,qed,sa" (ordinals global to the run) and
// "pocket_id,ordinal,qed,sa" (ordinals local to each pocket).
struct ExternalProperties {
  std::map<std::pair<std::string, int>, std::pair<double, double>> by_pocket_ordinal;
  bool pocket_scoped = false;  // true when the 4-column header was used
  std::vector<std::string> issues;

  // Lookup for (pocket, ordinal); global tables ignore the pocket key.
  std::optional<std::pair<double, double>> find(const std::string& pocket_id, int ordinal) const;
};

// Parses the sidecar CSV. Rows with qed/sa outside [0,1] are rejected into
// issues (range error), not clamped.
ExternalProperties parse_property_csv(std::string_view text);

}  // namespace pocketeval
