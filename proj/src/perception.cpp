#include "pocketeval/perception.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <queue>
#include <set>

#include "pocketeval/common.hpp"
#include "pocketeval/elements.hpp"

namespace pocketeval {
namespace {

struct PairKey {
  int lo, hi;
  PairKey(int a, int b) : lo(std::min(a, b)), hi(std::max(a, b)) {}
  bool operator<(const PairKey& o) const { return std::tie(lo, hi) < std::tie(o.lo, o.hi); }
};

// Double-bond length ceilings by element pair (Z, Z), before the fitting
// margin. Pairs not listed fall back to covalent-sum offsets.
const std::map<PairKey, double>& double_ceilings() {
  static const std::map<PairKey, double> t = {
      {{6, 6}, 1.33}, {{6, 7}, 1.30}, {{6, 8}, 1.22}, {{7, 7}, 1.25},
      {{7, 8}, 1.21}, {{8, 16}, 1.45}, {{6, 16}, 1.60}, {{8, 15}, 1.48},
  };
  return t;
}

const std::map<PairKey, double>& triple_ceilings() {
  static const std::map<PairKey, double> t = {{{6, 6}, 1.20}, {{6, 7}, 1.16}};
  return t;
}

constexpr double kDoubleMargin = 0.06;
constexpr double kTripleMargin = 0.05;
constexpr double kGenericDoubleOffset = 0.19;  // below covsum
constexpr double kGenericTripleOffset = 0.31;

int valence_capacity(int z) {
  switch (z) {
    case 1: return 1;
    case 5: return 3;
    case 6: return 4;
    case 7: return 3;
    case 8: return 2;
    case 14: return 4;
    case 15: return 5;
    case 16: return 6;
    case 34: return 2;
    case 9: case 17: case 35: case 53: return 1;
    default: return 0;  // no upgrades for anything exotic
  }
}

// How many multiple bonds one atom may carry.
int multiple_budget(int z) {
  switch (z) {
    case 6: case 7: case 8: case 15: return 1;
    case 16: return 2;  // sulfone
    default: return 0;
  }
}

}  // namespace

std::vector<BondRecord> perceive_bonds(const std::vector<AtomRecord>& atoms,
                                       const PerceptionOptions& opts) {
  std::vector<BondRecord> bonds;
  const int n = static_cast<int>(atoms.size());
  for (int i = 0; i < n; ++i) {
    double ri = covalent_radius(atoms[i].z);
    for (int j = i + 1; j < n; ++j) {
      double d = distance(atoms[i].pos, atoms[j].pos);
      if (d < opts.min_dist) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "degenerate geometry: atoms %d and %d are %.3f A apart",
                      i + 1, j + 1, d);
        throw Error(buf);
      }
      if (d <= ri + covalent_radius(atoms[j].z) + opts.tol) {
        bonds.push_back(BondRecord{i, j, 1, false});
      }
    }
  }
  return bonds;
}

void repair_bond_orders(MoleculeGraph& mol) {
  const int n = static_cast<int>(mol.atoms.size());
  std::vector<double> valence(n, 0);
  std::vector<int> budget(n);
  for (int i = 0; i < n; ++i) budget[i] = multiple_budget(mol.atoms[i].z);
  for (const auto& b : mol.bonds) {
    valence[b.a] += 1;
    valence[b.b] += 1;
  }

  struct Candidate {
    int bond;
    int order;       // best order the length supports
    double deficit;  // ceiling - distance at that order; larger = more certain
  };
  std::vector<Candidate> cands;
  for (size_t bi = 0; bi < mol.bonds.size(); ++bi) {
    const auto& b = mol.bonds[bi];
    int zi = mol.atoms[b.a].z, zj = mol.atoms[b.b].z;
    if (multiple_budget(zi) == 0 || multiple_budget(zj) == 0) continue;
    double d = distance(mol.atoms[b.a].pos, mol.atoms[b.b].pos);
    double covsum = covalent_radius(zi) + covalent_radius(zj);
    PairKey key(zi, zj);

    auto ceiling = [&](const std::map<PairKey, double>& table, double margin,
                       double generic_offset) {
      auto it = table.find(key);
      return it != table.end() ? it->second + margin : covsum - generic_offset;
    };
    double triple_max = ceiling(triple_ceilings(), kTripleMargin, kGenericTripleOffset);
    double double_max = ceiling(double_ceilings(), kDoubleMargin, kGenericDoubleOffset);
    if (d <= triple_max) {
      cands.push_back({static_cast<int>(bi), 3, triple_max - d});
    } else if (d <= double_max) {
      cands.push_back({static_cast<int>(bi), 2, double_max - d});
    }
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.deficit != b.deficit) return a.deficit > b.deficit;
    return a.bond < b.bond;
  });

  for (const auto& c : cands) {
    auto& b = mol.bonds[c.bond];
    if (budget[b.a] == 0 || budget[b.b] == 0) continue;
    int zi = mol.atoms[b.a].z, zj = mol.atoms[b.b].z;
    double spare_a = valence_capacity(zi) - valence[b.a];
    double spare_b = valence_capacity(zj) - valence[b.b];
    int extra = c.order - 1;
    // Fall back from triple to double when capacity only allows one step up.
    while (extra > 0 && (spare_a < extra || spare_b < extra)) --extra;
    if (extra == 0) continue;
    b.order = 1 + extra;
    valence[b.a] += extra;
    valence[b.b] += extra;
    --budget[b.a];
    --budget[b.b];
  }
}

std::pair<std::vector<int>, int> connected_components(const MoleculeGraph& mol) {
  const int n = static_cast<int>(mol.atoms.size());
  Adjacency adj(mol);
  std::vector<int> comp(n, -1);
  int next = 0, largest = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    int size = 0;
    std::queue<int> q;
    q.push(s);
    comp[s] = next;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      ++size;
      for (auto [w, bi] : adj.nbrs[v]) {
        (void)bi;
        if (comp[w] < 0) {
          comp[w] = next;
          q.push(w);
        }
      }
    }
    largest = std::max(largest, size);
    ++next;
  }
  return {std::move(comp), largest};
}

namespace {

using BitRow = std::vector<std::uint64_t>;

BitRow make_row(size_t nbits) { return BitRow((nbits + 63) / 64, 0); }
void set_bit(BitRow& r, int i) { r[i / 64] |= (std::uint64_t{1} << (i % 64)); }
bool any_bit(const BitRow& r) {
  for (auto w : r) if (w) return true;
  return false;
}
void xor_into(BitRow& a, const BitRow& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
}
int lowest_bit(const BitRow& r) {
  for (size_t i = 0; i < r.size(); ++i) {
    if (r[i]) return static_cast<int>(i * 64 + __builtin_ctzll(r[i]));
  }
  return -1;
}

// Gaussian elimination basis over GF(2), pivot on lowest set bit.
struct Gf2Basis {
  std::map<int, BitRow> pivots;
  bool add(BitRow row) {
    while (true) {
      int p = lowest_bit(row);
      if (p < 0) return false;
      auto it = pivots.find(p);
      if (it == pivots.end()) {
        pivots.emplace(p, std::move(row));
        return true;
      }
      xor_into(row, it->second);
    }
  }
};

// Atom cycle in traversal order from a simple cycle's bond set.
std::vector<int> cycle_atoms(const MoleculeGraph& mol, const std::vector<int>& bond_ids) {
  std::map<int, std::vector<int>> adj;  // atom -> neighbor atoms within the cycle
  for (int bi : bond_ids) {
    adj[mol.bonds[bi].a].push_back(mol.bonds[bi].b);
    adj[mol.bonds[bi].b].push_back(mol.bonds[bi].a);
  }
  int start = adj.begin()->first;
  std::vector<int> order{start};
  int prev = -1, cur = start;
  while (true) {
    const auto& nb = adj[cur];
    int nxt = (nb[0] != prev) ? nb[0] : nb[1];
    if (nxt == start) break;
    order.push_back(nxt);
    prev = cur;
    cur = nxt;
  }
  return order;
}

}  // namespace

std::vector<std::vector<int>> find_rings(const MoleculeGraph& mol) {
  const int n = static_cast<int>(mol.atoms.size());
  const int m = static_cast<int>(mol.bonds.size());
  if (n == 0 || m == 0) return {};
  Adjacency adj(mol);
  auto [comp, largest] = connected_components(mol);
  (void)largest;
  int ncomp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  int target = m - n + ncomp;
  if (target <= 0) return {};

  // Horton-style candidates: for root v and edge (x,y), the two BFS-tree
  // paths plus the edge, when the paths share only v.
  std::vector<std::vector<int>> parents(n);
  std::vector<std::vector<int>> parent_bond(n);
  std::vector<std::vector<int>> depth(n);
  for (int v = 0; v < n; ++v) {
    auto& par = parents[v];
    auto& pb = parent_bond[v];
    auto& dep = depth[v];
    par.assign(n, -1);
    pb.assign(n, -1);
    dep.assign(n, -1);
    std::queue<int> q;
    q.push(v);
    dep[v] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (auto [w, bi] : adj.nbrs[u]) {
        if (dep[w] < 0) {
          dep[w] = dep[u] + 1;
          par[w] = u;
          pb[w] = bi;
          q.push(w);
        }
      }
    }
  }

  struct Cand {
    int size;
    std::vector<int> bonds;  // sorted
    bool operator<(const Cand& o) const {
      if (size != o.size) return size < o.size;
      return bonds < o.bonds;
    }
  };
  std::set<Cand> seen;
  for (int v = 0; v < n; ++v) {
    const auto& par = parents[v];
    const auto& pb = parent_bond[v];
    const auto& dep = depth[v];
    for (int bi = 0; bi < m; ++bi) {
      int x = mol.bonds[bi].a, y = mol.bonds[bi].b;
      if (dep[x] < 0 || dep[y] < 0) continue;
      if (par[x] == y || par[y] == x) continue;  // tree edge
      // Collect the two root paths; reject when they meet anywhere but v.
      std::vector<char> on_x(n, 0);
      std::vector<int> bonds;
      for (int u = x; u != v; u = par[u]) {
        on_x[u] = 1;
        bonds.push_back(pb[u]);
      }
      bool disjoint = true;
      for (int u = y; u != v; u = par[u]) {
        if (on_x[u]) { disjoint = false; break; }
        bonds.push_back(pb[u]);
      }
      if (!disjoint) continue;
      bonds.push_back(bi);
      std::sort(bonds.begin(), bonds.end());
      seen.insert(Cand{static_cast<int>(bonds.size()), std::move(bonds)});
    }
  }

  std::vector<std::vector<int>> rings;
  Gf2Basis basis;
  for (const auto& c : seen) {
    if (static_cast<int>(rings.size()) == target) break;
    BitRow row = make_row(m);
    for (int bi : c.bonds) set_bit(row, bi);
    if (basis.add(std::move(row))) rings.push_back(cycle_atoms(mol, c.bonds));
  }

  // The tree-restricted candidate set can in principle come up short; the
  // fundamental cycles of any spanning forest always complete the basis.
  if (static_cast<int>(rings.size()) < target) {
    std::vector<char> in_tree(m, 0);
    std::vector<int> root_par(n, -1), root_pb(n, -1), root_dep(n, -1);
    for (int s = 0; s < n; ++s) {
      if (root_dep[s] >= 0) continue;
      root_dep[s] = 0;
      std::queue<int> q;
      q.push(s);
      while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (auto [w, bi] : adj.nbrs[u]) {
          if (root_dep[w] < 0) {
            root_dep[w] = root_dep[u] + 1;
            root_par[w] = u;
            root_pb[w] = bi;
            in_tree[bi] = 1;
            q.push(w);
          }
        }
      }
    }
    for (int bi = 0; bi < m && static_cast<int>(rings.size()) < target; ++bi) {
      if (in_tree[bi]) continue;
      // Walk both endpoints up to their lowest common ancestor.
      int x = mol.bonds[bi].a, y = mol.bonds[bi].b;
      std::vector<int> bonds{bi};
      while (x != y) {
        if (root_dep[x] >= root_dep[y]) {
          bonds.push_back(root_pb[x]);
          x = root_par[x];
        } else {
          bonds.push_back(root_pb[y]);
          y = root_par[y];
        }
      }
      std::sort(bonds.begin(), bonds.end());
      BitRow row = make_row(m);
      for (int b : bonds) set_bit(row, b);
      if (basis.add(std::move(row))) rings.push_back(cycle_atoms(mol, bonds));
    }
  }
  return rings;
}

namespace {

// Bridge detection; a bond lies on a cycle iff it is not a bridge.
std::vector<char> cycle_bonds(const MoleculeGraph& mol) {
  const int n = static_cast<int>(mol.atoms.size());
  const int m = static_cast<int>(mol.bonds.size());
  Adjacency adj(mol);
  std::vector<char> on_cycle(m, 1);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;
  // Iterative DFS; (vertex, parent bond, neighbor cursor).
  struct Frame { int v; int pbond; size_t i; };
  for (int s = 0; s < n; ++s) {
    if (disc[s] >= 0) continue;
    std::vector<Frame> stack{{s, -1, 0}};
    disc[s] = low[s] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.i < adj.nbrs[f.v].size()) {
        auto [w, bi] = adj.nbrs[f.v][f.i++];
        if (bi == f.pbond) continue;
        if (disc[w] < 0) {
          disc[w] = low[w] = timer++;
          stack.push_back({w, bi, 0});
        } else {
          low[f.v] = std::min(low[f.v], disc[w]);
        }
      } else {
        int v = f.v, pbond = f.pbond;
        stack.pop_back();
        if (!stack.empty()) {
          int p = stack.back().v;
          low[p] = std::min(low[p], low[v]);
          if (low[v] > disc[p]) on_cycle[pbond] = 0;  // bridge
        }
      }
    }
  }
  return on_cycle;
}

}  // namespace

RingInfo::RingInfo(const MoleculeGraph& mol) {
  rings = find_rings(mol);
  atom_in_ring.assign(mol.atoms.size(), 0);
  bond_in_ring = cycle_bonds(mol);
  for (size_t bi = 0; bi < mol.bonds.size(); ++bi) {
    if (bond_in_ring[bi]) {
      atom_in_ring[mol.bonds[bi].a] = 1;
      atom_in_ring[mol.bonds[bi].b] = 1;
    }
  }
}

namespace {

// sp2 consistency for ring membership: the atom could sit in a conjugated
// ring. Carbons need a double bond; N contributes either a double bond or a
// lone pair; O/S contribute lone pairs.
bool sp2_consistent(const MoleculeGraph& mol, const Adjacency& adj, int atom) {
  int z = mol.atoms[atom].z;
  int doubles = 0, triples = 0;
  for (auto [w, bi] : adj.nbrs[atom]) {
    (void)w;
    if (mol.bonds[bi].order == 2) ++doubles;
    if (mol.bonds[bi].order == 3) ++triples;
  }
  if (triples > 0) return false;
  int heavy_deg = 0;
  for (auto [w, bi] : adj.nbrs[atom]) {
    (void)bi;
    if (mol.atoms[w].z > 1) ++heavy_deg;
  }
  switch (z) {
    case 6: return doubles == 1 && heavy_deg <= 3;
    case 7: return (doubles <= 1) && heavy_deg <= 3;
    case 8: case 16: return doubles == 0 && heavy_deg == 2;
    default: return false;
  }
}

}  // namespace

void perceive_aromaticity(MoleculeGraph& mol) {
  Adjacency adj(mol);
  auto rings = find_rings(mol);
  for (const auto& ring : rings) {
    if (ring.size() != 5 && ring.size() != 6) continue;
    std::vector<int> ring_bonds;
    bool closed = true;
    for (size_t i = 0; i < ring.size(); ++i) {
      int a = ring[i], b = ring[(i + 1) % ring.size()];
      int found = -1;
      for (auto [w, bi] : adj.nbrs[a]) {
        if (w == b) { found = bi; break; }
      }
      if (found < 0) { closed = false; break; }
      ring_bonds.push_back(found);
    }
    if (!closed) continue;

    bool all_declared = true;
    for (int bi : ring_bonds) all_declared = all_declared && mol.bonds[bi].aromatic;
    bool all_sp2 = true;
    for (int a : ring) all_sp2 = all_sp2 && sp2_consistent(mol, adj, a);
    if (all_declared || all_sp2) {
      for (int bi : ring_bonds) mol.bonds[bi].aromatic = true;
    }
  }
}

std::vector<char> aromatic_atoms(const MoleculeGraph& mol) {
  std::vector<char> out(mol.atoms.size(), 0);
  Adjacency adj(mol);
  for (const auto& ring : find_rings(mol)) {
    bool all = true;
    for (size_t i = 0; i < ring.size() && all; ++i) {
      int a = ring[i], b = ring[(i + 1) % ring.size()];
      bool arom = false;
      for (auto [w, bi] : adj.nbrs[a]) {
        if (w == b) { arom = mol.bonds[bi].aromatic; break; }
      }
      all = arom;
    }
    if (all) {
      for (int a : ring) out[a] = 1;
    }
  }
  return out;
}

int implicit_hydrogens(const MoleculeGraph& mol, const Adjacency& adj, int atom) {
  int z = mol.atoms[atom].z;
  int charge = mol.atoms[atom].charge;
  double def;
  switch (z) {
    case 6: def = 4; break;
    case 7: def = 3 + charge; break;
    case 8: def = 2 + charge; break;
    case 16: def = 2; break;
    default: return 0;
  }
  double val = 0;
  for (auto [w, bi] : adj.nbrs[atom]) {
    (void)w;
    int order = mol.bonds[bi].order;
    val += (order == 4) ? 1.5 : order;
  }
  int h = static_cast<int>(std::floor(def - val + 1e-9));
  return std::max(0, h);
}

int rotatable_bond_count(const MoleculeGraph& mol) {
  Adjacency adj(mol);
  auto on_cycle = cycle_bonds(mol);
  std::vector<int> heavy_deg(mol.atoms.size(), 0);
  for (const auto& b : mol.bonds) {
    if (mol.atoms[b.b].z > 1) ++heavy_deg[b.a];
    if (mol.atoms[b.a].z > 1) ++heavy_deg[b.b];
  }
  auto carbonyl_carbon = [&](int a) {
    if (mol.atoms[a].z != 6) return false;
    for (auto [w, bi] : adj.nbrs[a]) {
      if (mol.bonds[bi].order == 2 && mol.atoms[w].z == 8) return true;
    }
    return false;
  };
  int count = 0;
  for (size_t bi = 0; bi < mol.bonds.size(); ++bi) {
    const auto& b = mol.bonds[bi];
    if (b.order != 1 || b.aromatic || on_cycle[bi]) continue;
    if (mol.atoms[b.a].z == 1 || mol.atoms[b.b].z == 1) continue;
    if (heavy_deg[b.a] < 2 || heavy_deg[b.b] < 2) continue;
    bool amide = (carbonyl_carbon(b.a) && mol.atoms[b.b].z == 7) ||
                 (carbonyl_carbon(b.b) && mol.atoms[b.a].z == 7);
    if (amide) continue;
    ++count;
  }
  return count;
}

std::pair<MoleculeGraph, ValidityVerdict> reconstruct_and_validate(
    const std::vector<AtomRecord>& atoms) {
  MoleculeGraph mol;
  mol.atoms = atoms;
  PerceptionOptions strict;
  mol.bonds = perceive_bonds(atoms, strict);

  ValidityVerdict verdict;
  auto ratio = [&](const MoleculeGraph& m) {
    if (m.atoms.empty()) return 0.0;
    return double(connected_components(m).second) / double(m.atoms.size());
  };
  verdict.largest_fragment_ratio = ratio(mol);
  if (verdict.largest_fragment_ratio <= 0.85) {
    PerceptionOptions relaxed;
    relaxed.tol = 0.56;
    mol.bonds = perceive_bonds(atoms, relaxed);
    verdict.path = ValidityVerdict::Path::Fallback;
    verdict.largest_fragment_ratio = ratio(mol);
  }
  verdict.valid = verdict.largest_fragment_ratio > 0.85;

  repair_bond_orders(mol);
  perceive_aromaticity(mol);
  return {std::move(mol), verdict};
}

}  // namespace pocketeval
