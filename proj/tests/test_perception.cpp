#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "pocketeval/common.hpp"
#include "pocketeval/perception.hpp"
#include "support/molfab.hpp"

using namespace pocketeval;

namespace {

MoleculeGraph from_cloud(std::vector<AtomRecord> atoms) {
  MoleculeGraph m;
  m.atoms = std::move(atoms);
  m.bonds = perceive_bonds(m.atoms);
  return m;
}

AtomRecord at(int z, double x, double y, double zc) {
  return AtomRecord{z, Vec3{x, y, zc}, 0};
}

int order_between(const MoleculeGraph& m, int a, int b) {
  for (const auto& bd : m.bonds) {
    if ((bd.a == a && bd.b == b) || (bd.a == b && bd.b == a)) return bd.order;
  }
  return 0;
}

}  // namespace

TEST_CASE("perceive_bonds: heavy-atom ethanol skeleton") {
  auto m = from_cloud({at(6, 0, 0, 0), at(6, 1.54, 0, 0), at(8, 2.02, 1.33, 0)});
  REQUIRE(m.bonds.size() == 2);
  CHECK(order_between(m, 0, 1) == 1);
  CHECK(order_between(m, 1, 2) == 1);
  CHECK(order_between(m, 0, 2) == 0);
}

TEST_CASE("perceive_bonds: coincident atoms refuse") {
  CHECK_THROWS_AS(perceive_bonds({at(6, 0, 0, 0), at(6, 0.2, 0, 0)}), Error);
}

TEST_CASE("repair_bond_orders: classic multiple-bond lengths") {
  SUBCASE("carbonyl") {
    auto m = from_cloud({at(6, 0, 0, 0), at(8, 1.21, 0, 0)});
    repair_bond_orders(m);
    CHECK(order_between(m, 0, 1) == 2);
  }
  SUBCASE("alkene") {
    auto m = from_cloud({at(6, 0, 0, 0), at(6, 1.33, 0, 0)});
    repair_bond_orders(m);
    CHECK(order_between(m, 0, 1) == 2);
  }
  SUBCASE("alkyne") {
    auto m = from_cloud({at(6, 0, 0, 0), at(6, 1.20, 0, 0)});
    repair_bond_orders(m);
    CHECK(order_between(m, 0, 1) == 3);
  }
  SUBCASE("nitrile") {
    auto m = from_cloud({at(6, 0, 0, 0), at(7, 1.16, 0, 0)});
    repair_bond_orders(m);
    CHECK(order_between(m, 0, 1) == 3);
  }
  SUBCASE("plain single stays single") {
    auto m = from_cloud({at(6, 0, 0, 0), at(6, 1.54, 0, 0)});
    repair_bond_orders(m);
    CHECK(order_between(m, 0, 1) == 1);
  }
}

TEST_CASE("repair_bond_orders: sulfone takes two doubles, carbon only one") {
  // Dimethyl sulfone skeleton.
  auto m = from_cloud({at(16, 0, 0, 0), at(8, 0, 1.43, 0), at(8, 0, -1.43, 0),
                       at(6, 1.79, 0, 0), at(6, -1.79, 0, 0)});
  repair_bond_orders(m);
  CHECK(order_between(m, 0, 1) == 2);
  CHECK(order_between(m, 0, 2) == 2);
  CHECK(order_between(m, 0, 3) == 1);
  CHECK(order_between(m, 0, 4) == 1);

  // Carboxylate-like carbon with two 1.25 A oxygens placed at the exact
  // same distance: capacity allows only one double and the tie resolves to
  // the lower bond index.
  auto c = from_cloud({at(6, 0, 0, 0), at(8, 1.25, 0, 0), at(8, -1.25, 0, 0)});
  repair_bond_orders(c);
  int doubles = (order_between(c, 0, 1) == 2) + (order_between(c, 0, 2) == 2);
  CHECK(doubles == 1);
  CHECK(order_between(c, 0, 1) == 2);
}

TEST_CASE("find_rings: counts follow the cyclomatic number") {
  SUBCASE("benzene has one hexagon") {
    auto rings = find_rings(fab::benzene());
    REQUIRE(rings.size() == 1);
    CHECK(rings[0].size() == 6);
  }
  SUBCASE("chain has none") { CHECK(find_rings(fab::chain({6, 6, 6, 6})).empty()); }
  SUBCASE("naphthalene has two hexagons") {
    MoleculeGraph m;
    for (int i = 0; i < 10; ++i) fab::add_atom(m, 6, 0, 0, 0);
    int e[][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6},
                  {6, 7}, {7, 8}, {8, 9}, {9, 0}, {2, 7}};
    for (auto& p : e) fab::add_bond(m, p[0], p[1]);
    auto rings = find_rings(m);
    REQUIRE(rings.size() == 2);
    CHECK(rings[0].size() == 6);
    CHECK(rings[1].size() == 6);
  }
  SUBCASE("spiro pair of triangles") {
    MoleculeGraph m;
    for (int i = 0; i < 5; ++i) fab::add_atom(m, 6, 0, 0, 0);
    int e[][2] = {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 2}};
    for (auto& p : e) fab::add_bond(m, p[0], p[1]);
    auto rings = find_rings(m);
    REQUIRE(rings.size() == 2);
    CHECK(rings[0].size() == 3);
    CHECK(rings[1].size() == 3);
  }
  SUBCASE("two disconnected triangles") {
    MoleculeGraph m;
    for (int i = 0; i < 6; ++i) fab::add_atom(m, 6, 0, 0, 0);
    int e[][2] = {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}};
    for (auto& p : e) fab::add_bond(m, p[0], p[1]);
    CHECK(find_rings(m).size() == 2);
  }
  SUBCASE("bicyclo bridge: smallest two of three cycles") {
    // Bicyclo[2.2.1]heptane: cycles of size 5, 5, 6; SSSR keeps the fives.
    MoleculeGraph m;
    for (int i = 0; i < 7; ++i) fab::add_atom(m, 6, 0, 0, 0);
    int e[][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 6}, {6, 3}};
    for (auto& p : e) fab::add_bond(m, p[0], p[1]);
    auto rings = find_rings(m);
    REQUIRE(rings.size() == 2);
    CHECK(rings[0].size() == 5);
    CHECK(rings[1].size() == 5);
  }
}

TEST_CASE("RingInfo: membership marks ring atoms and bonds only") {
  MoleculeGraph m = fab::benzene();
  int methyl = fab::add_atom(m, 6, 2.9, 0, 0);
  fab::add_bond(m, 0, methyl);
  RingInfo info(m);
  CHECK(info.rings.size() == 1);
  CHECK(info.atom_in_ring[0]);
  CHECK(!info.atom_in_ring[methyl]);
  for (size_t bi = 0; bi < m.bonds.size(); ++bi) {
    bool touches_methyl = m.bonds[bi].a == methyl || m.bonds[bi].b == methyl;
    CHECK(static_cast<bool>(info.bond_in_ring[bi]) == !touches_methyl);
  }
}

TEST_CASE("perceive_aromaticity: flags conjugated rings, leaves orders alone") {
  SUBCASE("kekulized benzene") {
    auto m = fab::benzene();
    for (auto& b : m.bonds) b.aromatic = false;
    perceive_aromaticity(m);
    int doubles = 0;
    for (const auto& b : m.bonds) {
      CHECK(b.aromatic);
      doubles += (b.order == 2);
    }
    CHECK(doubles == 3);  // kekule pattern intact
  }
  SUBCASE("cyclohexane stays plain") {
    MoleculeGraph m;
    for (int i = 0; i < 6; ++i) fab::add_atom(m, 6, 0, 0, 0);
    for (int i = 0; i < 6; ++i) fab::add_bond(m, i, (i + 1) % 6, 1);
    perceive_aromaticity(m);
    for (const auto& b : m.bonds) CHECK(!b.aromatic);
  }
  SUBCASE("cyclohexene stays plain") {
    MoleculeGraph m;
    for (int i = 0; i < 6; ++i) fab::add_atom(m, 6, 0, 0, 0);
    for (int i = 0; i < 6; ++i) fab::add_bond(m, i, (i + 1) % 6, i == 0 ? 2 : 1);
    perceive_aromaticity(m);
    for (const auto& b : m.bonds) CHECK(!b.aromatic);
  }
  SUBCASE("kekulized pyridine and furan are aromatic") {
    MoleculeGraph pyr;
    fab::add_atom(pyr, 7, 0, 0, 0);
    for (int i = 0; i < 5; ++i) fab::add_atom(pyr, 6, 0, 0, 0);
    for (int i = 0; i < 6; ++i) fab::add_bond(pyr, i, (i + 1) % 6, (i % 2) ? 1 : 2);
    perceive_aromaticity(pyr);
    for (const auto& b : pyr.bonds) CHECK(b.aromatic);

    MoleculeGraph fur;
    fab::add_atom(fur, 8, 0, 0, 0);
    for (int i = 0; i < 4; ++i) fab::add_atom(fur, 6, 0, 0, 0);
    int spec[][3] = {{0, 1, 1}, {1, 2, 2}, {2, 3, 1}, {3, 4, 2}, {4, 0, 1}};
    for (auto& s : spec) fab::add_bond(fur, s[0], s[1], s[2]);
    perceive_aromaticity(fur);
    for (const auto& b : fur.bonds) CHECK(b.aromatic);
  }
}

TEST_CASE("implicit_hydrogens: default valences with aromatic halves") {
  auto benz = fab::benzene();
  Adjacency badj(benz);
  for (int i = 0; i < 6; ++i) CHECK(implicit_hydrogens(benz, badj, i) == 1);

  auto meth = fab::methane();
  Adjacency madj(meth);
  CHECK(implicit_hydrogens(meth, madj, 0) == 0);

  // Declared-aromatic pyridine via order-4 bonds: N valence 3, no H.
  MoleculeGraph pyr;
  fab::add_atom(pyr, 7, 0, 0, 0);
  for (int i = 0; i < 5; ++i) fab::add_atom(pyr, 6, 0, 0, 0);
  for (int i = 0; i < 6; ++i) fab::add_bond(pyr, i, (i + 1) % 6, 4, true);
  Adjacency padj(pyr);
  CHECK(implicit_hydrogens(pyr, padj, 0) == 0);
  CHECK(implicit_hydrogens(pyr, padj, 1) == 1);

  // Kekulized pyrrole: N keeps its hydrogen.
  MoleculeGraph pyl;
  fab::add_atom(pyl, 7, 0, 0, 0);
  for (int i = 0; i < 4; ++i) fab::add_atom(pyl, 6, 0, 0, 0);
  int spec[][3] = {{0, 1, 1}, {1, 2, 2}, {2, 3, 1}, {3, 4, 2}, {4, 0, 1}};
  for (auto& s : spec) fab::add_bond(pyl, s[0], s[1], s[2]);
  Adjacency ladj(pyl);
  CHECK(implicit_hydrogens(pyl, ladj, 0) == 1);

  // Charge shifts nitrogen and oxygen defaults.
  MoleculeGraph ion;
  fab::add_atom(ion, 7, 0, 0, 0, +1);
  fab::add_atom(ion, 8, 3, 0, 0, -1);
  Adjacency iadj(ion);
  CHECK(implicit_hydrogens(ion, iadj, 0) == 4);
  CHECK(implicit_hydrogens(ion, iadj, 1) == 1);
}

TEST_CASE("rotatable_bond_count: terminal, ring, and amide bonds excluded") {
  CHECK(rotatable_bond_count(fab::chain({6, 6, 6, 6})) == 1);
  CHECK(rotatable_bond_count(fab::chain({6, 6, 6, 6, 6})) == 2);
  CHECK(rotatable_bond_count(fab::benzene()) == 0);

  // N-methylacetamide: the amide C-N does not rotate freely.
  MoleculeGraph ama;
  int c1 = fab::add_atom(ama, 6, 0, 0, 0);
  int c2 = fab::add_atom(ama, 6, 1.5, 0, 0);
  int o = fab::add_atom(ama, 8, 2.1, 1.05, 0);
  int n = fab::add_atom(ama, 7, 2.2, -1.2, 0);
  int c3 = fab::add_atom(ama, 6, 3.6, -1.3, 0);
  fab::add_bond(ama, c1, c2);
  fab::add_bond(ama, c2, o, 2);
  fab::add_bond(ama, c2, n);
  fab::add_bond(ama, n, c3);
  CHECK(rotatable_bond_count(ama) == 0);

  // Biphenyl: one rotor between the rings.
  MoleculeGraph bip = fab::benzene();
  auto second = fab::benzene();
  int off = static_cast<int>(bip.atoms.size());
  for (auto a : second.atoms) {
    a.pos.x += 10;
    bip.atoms.push_back(a);
  }
  for (auto b : second.bonds) bip.bonds.push_back({b.a + off, b.b + off, b.order, b.aromatic});
  fab::add_bond(bip, 0, off);
  CHECK(rotatable_bond_count(bip) == 1);
}

TEST_CASE("reconstruct_and_validate: fragment ratio gates validity") {
  auto cloud = [](int na, int nb, double gap) {
    std::vector<AtomRecord> atoms;
    for (int i = 0; i < na; ++i) atoms.push_back(at(6, 1.54 * i, 0, 0));
    for (int i = 0; i < nb; ++i) atoms.push_back(at(6, 1.54 * (na - 1) + gap + 1.54 * i, 8, 0));
    return atoms;
  };

  SUBCASE("5+5 split is invalid at ratio 0.5") {
    auto [mol, verdict] = reconstruct_and_validate(cloud(5, 5, 50));
    CHECK(!verdict.valid);
    CHECK(verdict.largest_fragment_ratio == doctest::Approx(0.5));
    CHECK(verdict.path == ValidityVerdict::Path::Fallback);
  }
  SUBCASE("9+1 split is valid at ratio 0.9") {
    auto [mol, verdict] = reconstruct_and_validate(cloud(9, 1, 50));
    CHECK(verdict.valid);
    CHECK(verdict.largest_fragment_ratio == doctest::Approx(0.9));
  }
  SUBCASE("a stretched bond heals on the fallback pass") {
    std::vector<AtomRecord> atoms;
    for (int i = 0; i < 5; ++i) atoms.push_back(at(6, 1.54 * i, 0, 0));
    double start = 1.54 * 4 + 2.05;  // beyond strict, inside relaxed
    for (int i = 0; i < 5; ++i) atoms.push_back(at(6, start + 1.54 * i, 0, 0));
    auto [mol, verdict] = reconstruct_and_validate(atoms);
    CHECK(verdict.valid);
    CHECK(verdict.path == ValidityVerdict::Path::Fallback);
    CHECK(verdict.largest_fragment_ratio == doctest::Approx(1.0));
    CHECK(mol.bonds.size() == 9);
  }
  SUBCASE("clean cloud stays on the strict path") {
    auto [mol, verdict] = reconstruct_and_validate(cloud(10, 0, 0));
    CHECK(verdict.valid);
    CHECK(verdict.path == ValidityVerdict::Path::Refine);
  }
}

TEST_CASE("connected_components: ids and largest size") {
  MoleculeGraph m = fab::chain({6, 6, 6});
  fab::add_atom(m, 8, 100, 0, 0);
  auto [ids, largest] = connected_components(m);
  CHECK(largest == 3);
  CHECK(ids[0] == ids[1]);
  CHECK(ids[0] == ids[2]);
  CHECK(ids[3] != ids[0]);
}
