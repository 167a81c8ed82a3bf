#pragma once

// Hand-rolled fixture builders shared by the test suites. Coordinates are
// only as good as the tests need them to be; anything checking perception
// uses realistic bond lengths, anything purely topological does not.

#include <cmath>
#include <vector>

#include "pocketeval/mol.hpp"

namespace fab {

using pocketeval::AtomRecord;
using pocketeval::BondRecord;
using pocketeval::MoleculeGraph;
using pocketeval::Vec3;

inline int add_atom(MoleculeGraph& m, int z, double x, double y, double zc, int charge = 0) {
  m.atoms.push_back(AtomRecord{z, Vec3{x, y, zc}, charge});
  return static_cast<int>(m.atoms.size()) - 1;
}

inline void add_bond(MoleculeGraph& m, int a, int b, int order = 1, bool aromatic = false) {
  m.bonds.push_back(BondRecord{a, b, order, aromatic});
}

// Straight chain of the given elements, single-bonded, spacing apart on x.
inline MoleculeGraph chain(const std::vector<int>& zs, double spacing = 1.54) {
  MoleculeGraph m;
  m.name = "chain";
  for (size_t i = 0; i < zs.size(); ++i) add_atom(m, zs[i], spacing * double(i), 0, 0);
  for (size_t i = 0; i + 1 < zs.size(); ++i) add_bond(m, int(i), int(i + 1));
  return m;
}

// Kekulized benzene on a 1.39 A hexagon, aromatic flags set, no hydrogens.
inline MoleculeGraph benzene() {
  MoleculeGraph m;
  m.name = "benzene";
  const double r = 1.39;
  for (int i = 0; i < 6; ++i) {
    double a = M_PI / 3.0 * i;
    add_atom(m, 6, r * std::cos(a), r * std::sin(a), 0);
  }
  for (int i = 0; i < 6; ++i) add_bond(m, i, (i + 1) % 6, (i % 2) ? 1 : 2, true);
  return m;
}

// Benzene with explicit ring hydrogens pointing outward.
inline MoleculeGraph benzene_h() {
  MoleculeGraph m = benzene();
  const double rh = 1.39 + 1.09;
  for (int i = 0; i < 6; ++i) {
    double a = M_PI / 3.0 * i;
    int h = add_atom(m, 1, rh * std::cos(a), rh * std::sin(a), 0);
    add_bond(m, i, h);
  }
  return m;
}

// Methane with tetrahedral hydrogens.
inline MoleculeGraph methane() {
  MoleculeGraph m;
  m.name = "methane";
  add_atom(m, 6, 0, 0, 0);
  const double d = 1.09 / std::sqrt(3.0);
  add_atom(m, 1, d, d, d);
  add_atom(m, 1, d, -d, -d);
  add_atom(m, 1, -d, d, -d);
  add_atom(m, 1, -d, -d, d);
  for (int h = 1; h <= 4; ++h) add_bond(m, 0, h);
  return m;
}

// Ethanol C-C-O with hydrogens, realistic lengths.
inline MoleculeGraph ethanol() {
  MoleculeGraph m;
  m.name = "ethanol";
  int c1 = add_atom(m, 6, 0, 0, 0);
  int c2 = add_atom(m, 6, 1.54, 0, 0);
  int o = add_atom(m, 8, 2.02, 1.33, 0);
  add_bond(m, c1, c2);
  add_bond(m, c2, o);
  const double d = 1.09 / std::sqrt(3.0);
  int h;
  h = add_atom(m, 1, -d, d, d); add_bond(m, c1, h);
  h = add_atom(m, 1, -d, -d, d); add_bond(m, c1, h);
  h = add_atom(m, 1, -d, 0, -1.05); add_bond(m, c1, h);
  h = add_atom(m, 1, 1.54 + d, d, -d); add_bond(m, c2, h);
  h = add_atom(m, 1, 1.54 + d, -d, d); add_bond(m, c2, h);
  h = add_atom(m, 1, 2.98, 1.35, 0); add_bond(m, o, h);
  return m;
}

}  // namespace fab
