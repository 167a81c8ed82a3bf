#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "pocketeval/fragments.hpp"
#include "support/molfab.hpp"

using namespace pocketeval;

TEST_CASE("murcko: toluene keeps the ring, sheds the methyl") {
  MoleculeGraph m = fab::benzene();
  int methyl = fab::add_atom(m, 6, 2.9, 0, 0);
  fab::add_bond(m, 0, methyl);
  auto d = murcko_decompose(m);
  CHECK(!d.acyclic);
  CHECK(d.scaffold_atoms == std::vector<int>({0, 1, 2, 3, 4, 5}));
  REQUIRE(d.sidechain_components.size() == 1);
  CHECK(d.sidechain_components[0] == std::vector<int>({methyl}));
  CHECK(d.linker_atoms.empty());
}

TEST_CASE("murcko: diphenylmethane keeps the bridge carbon as linker") {
  MoleculeGraph m = fab::benzene();
  int off = static_cast<int>(m.atoms.size());
  auto second = fab::benzene();
  for (auto a : second.atoms) {
    a.pos.x += 10;
    m.atoms.push_back(a);
  }
  for (auto b : second.bonds) m.bonds.push_back({b.a + off, b.b + off, b.order, b.aromatic});
  int bridge = fab::add_atom(m, 6, 5, 0, 0);
  fab::add_bond(m, 0, bridge);
  fab::add_bond(m, off, bridge);
  auto d = murcko_decompose(m);
  CHECK(d.scaffold_atoms.size() == 13);
  CHECK(d.linker_atoms == std::vector<int>({bridge}));
  CHECK(d.sidechain_components.empty());
}

TEST_CASE("murcko: acyclic molecules have no scaffold") {
  auto d = murcko_decompose(fab::chain({6, 6, 6, 6}));
  CHECK(d.acyclic);
  CHECK(d.scaffold_atoms.empty());
  REQUIRE(d.sidechain_components.size() == 1);
  CHECK(d.sidechain_components[0].size() == 4);
  CHECK(d.linker_atoms.empty());
}

TEST_CASE("murcko: multi-atom side chain comes off as one component") {
  MoleculeGraph m = fab::benzene();
  int c1 = fab::add_atom(m, 6, 2.9, 0, 0);
  int c2 = fab::add_atom(m, 6, 4.4, 0, 0);
  int o = fab::add_atom(m, 8, 5.8, 0, 0);
  fab::add_bond(m, 0, c1);
  fab::add_bond(m, c1, c2);
  fab::add_bond(m, c2, o);
  auto d = murcko_decompose(m);
  CHECK(d.scaffold_atoms.size() == 6);
  REQUIRE(d.sidechain_components.size() == 1);
  CHECK(d.sidechain_components[0] == std::vector<int>({c1, c2, o}));
}

TEST_CASE("murcko: hydrogens belong to no partition") {
  MoleculeGraph m = fab::benzene_h();
  int methyl = fab::add_atom(m, 6, -2.9, 0, 0);
  fab::add_bond(m, 3, methyl);
  auto d = murcko_decompose(m);
  std::set<int> all;
  for (int a : d.scaffold_atoms) all.insert(a);
  for (const auto& c : d.sidechain_components)
    for (int a : c) all.insert(a);
  for (int a : all) CHECK(m.atoms[a].z > 1);
  // Scaffold plus side chains is exactly the heavy-atom set.
  size_t heavy = 0;
  for (const auto& at : m.atoms) heavy += (at.z > 1);
  CHECK(all.size() == heavy);
}

TEST_CASE("murcko: two ring systems with a two-atom tether") {
  // Ring-CH2-CH2-Ring: both tether atoms are linker atoms.
  MoleculeGraph m = fab::benzene();
  int off = static_cast<int>(m.atoms.size());
  auto second = fab::benzene();
  for (auto a : second.atoms) {
    a.pos.x += 12;
    m.atoms.push_back(a);
  }
  for (auto b : second.bonds) m.bonds.push_back({b.a + off, b.b + off, b.order, b.aromatic});
  int t1 = fab::add_atom(m, 6, 5, 0, 0);
  int t2 = fab::add_atom(m, 6, 7, 0, 0);
  fab::add_bond(m, 0, t1);
  fab::add_bond(m, t1, t2);
  fab::add_bond(m, t2, off);
  auto d = murcko_decompose(m);
  CHECK(d.scaffold_atoms.size() == 14);
  CHECK(d.linker_atoms == std::vector<int>({t1, t2}));
}
