#pragma once

#include <vector>

#include "pocketeval/mol.hpp"

namespace pocketeval {

struct MurckoDecomposition {
  std::vector<int> scaffold_atoms;                    // sorted
  std::vector<std::vector<int>> sidechain_components; // each sorted, ordered by smallest member
  std::vector<int> linker_atoms;                      // acyclic scaffold atoms, sorted
  bool acyclic = false;                               // no rings: scaffold empty, whole molecule side chains
};

// Iteratively prune degree-1 non-ring heavy atoms to a fixpoint. Hydrogens
// are ignored entirely (they belong to no partition set). Scaffold plus
// side-chain components partition the heavy atoms exactly.
MurckoDecomposition murcko_decompose(const MoleculeGraph& mol);

}  // namespace pocketeval
