#pragma once

#include <vector>

#include "pocketeval/mol.hpp"

namespace pocketeval {

struct PerceptionOptions {
  // Bond emitted when dist <= cov(i) + cov(j) + tol. 0.45 is the strict
  // pass; reconstruction falls back to 0.56 when the strict graph fragments.
  double tol = 0.45;
  // Below this separation the geometry is degenerate and perception refuses.
  double min_dist = 0.4;
};

// Distance-rule bond perception over a typed point cloud. Orders all start
// single; call repair_bond_orders afterwards for multiple-bond assignment.
// Throws Error on coincident atoms (pair listed in the message).
std::vector<BondRecord> perceive_bonds(const std::vector<AtomRecord>& atoms,
                                       const PerceptionOptions& opts = {});

// Upgrade single bonds to double/triple where bond lengths demand it, gated
// by per-element capacity (C4 N3 O2 S6 P5, halogens 1) and one multiple bond
// per atom (two for S). Greedy by descending length deficit; deterministic.
void repair_bond_orders(MoleculeGraph& mol);

// SSSR cycle basis; |E| - |V| + C cycles, deterministic tie-breaking. Each
// ring is an atom-index cycle in traversal order.
std::vector<std::vector<int>> find_rings(const MoleculeGraph& mol);

// Ring/bond membership helper shared by the metric modules.
struct RingInfo {
  std::vector<std::vector<int>> rings;
  std::vector<char> atom_in_ring;   // per atom
  std::vector<char> bond_in_ring;   // per bond
  explicit RingInfo(const MoleculeGraph& mol);
};

// Flags bonds of rings whose members are sp2-consistent (or were read as
// aromatic). Orders are left untouched, so kekulized inputs stay kekulized.
void perceive_aromaticity(MoleculeGraph& mol);

// True when the atom sits in a ring every bond of which is flagged aromatic.
std::vector<char> aromatic_atoms(const MoleculeGraph& mol);

// Implicit hydrogen count from default valences (C4 N3 O2 S2); aromatic
// bonds count 1.5 toward the valence sum. Other elements get none.
int implicit_hydrogens(const MoleculeGraph& mol, const Adjacency& adj, int atom);

// Single, non-ring bonds with both endpoints of heavy-degree >= 2, amide C-N
// excluded.
int rotatable_bond_count(const MoleculeGraph& mol);

struct ValidityVerdict {
  bool valid = false;
  double largest_fragment_ratio = 0;
  enum class Path { Refine, Fallback } path = Path::Refine;
};

// Two-stage reconstruction: strict perception + order repair; if the largest
// connected component covers <= 85% of the atoms, re-perceive with the
// relaxed tolerance. valid <=> ratio > 0.85.
std::pair<MoleculeGraph, ValidityVerdict> reconstruct_and_validate(
    const std::vector<AtomRecord>& atoms);

// Connected components over the bond graph; returns per-atom component id
// and the size of the largest component.
std::pair<std::vector<int>, int> connected_components(const MoleculeGraph& mol);

}  // namespace pocketeval
