#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pocketeval/mol.hpp"

namespace pocketeval {

struct FunctionalGroupPattern {
  std::string id;          // SMILES-style label, also the distribution label
  MoleculeGraph graph;     // template: elements, orders, aromatic flags
  int anchor_a = -1, anchor_b = -1, anchor_c = -1;  // framing node indices
  std::vector<int> c_center;  // when c is the midpoint of a node pair instead
  long occurrences = 0;       // corpus frequency the library ships with
};

// The shipped 25-entry library (embedded copy of data/functional_groups.json).
const std::vector<FunctionalGroupPattern>& functional_group_library();

// Parse a library from JSON text (same schema as the data file).
std::vector<FunctionalGroupPattern> parse_functional_groups(std::string_view json_text);

// Occurrence count per pattern id: subgraph monomorphisms divided by the
// pattern's automorphism count, so each embedded copy counts once. An
// aromatic pattern bond matches any aromatic-flagged bond regardless of its
// kekulized order; a plain bond needs the same order and no aromatic flag.
// Atom aromaticity (incident aromatic bond) must agree; charges and
// hydrogens are ignored. Requires perceived aromaticity on mol.
std::map<std::string, int> match_functional_groups(
    const MoleculeGraph& mol, const std::vector<FunctionalGroupPattern>& library);

// Monomorphism count of one pattern into mol (before automorphism collapse);
// exposed for the oracle cross-checks.
long count_monomorphisms(const MoleculeGraph& pattern, const MoleculeGraph& mol);

}  // namespace pocketeval
