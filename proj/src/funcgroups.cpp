#include "pocketeval/funcgroups.hpp"

#include <algorithm>

#include "json.hpp"
#include "pocketeval/common.hpp"
#include "pocketeval/elements.hpp"
#include "pocketeval/embedded_data.hpp"

namespace pocketeval {
namespace {

// Per-atom "has an aromatic-flagged bond" marks; the matcher's notion of
// atom aromaticity on both sides.
std::vector<char> bond_aromatic_atoms(const MoleculeGraph& g) {
  std::vector<char> out(g.atoms.size(), 0);
  for (const auto& b : g.bonds) {
    if (b.aromatic) out[b.a] = out[b.b] = 1;
  }
  return out;
}

struct TargetIndex {
  const MoleculeGraph& mol;
  std::vector<std::vector<std::pair<int, int>>> nbrs;  // (atom, bond)
  std::vector<char> arom;
  explicit TargetIndex(const MoleculeGraph& m) : mol(m), nbrs(m.atoms.size()) {
    for (size_t bi = 0; bi < m.bonds.size(); ++bi) {
      const auto& b = m.bonds[bi];
      nbrs[b.a].push_back({b.b, static_cast<int>(bi)});
      nbrs[b.b].push_back({b.a, static_cast<int>(bi)});
    }
    arom = bond_aromatic_atoms(m);
  }
};

bool bond_compatible(const BondRecord& pat, const BondRecord& tgt) {
  if (pat.aromatic) return tgt.aromatic;
  return !tgt.aromatic && tgt.order == pat.order;
}

// Pattern vertices in a connected visit order so each step extends a mapped
// neighbor; starts from the highest-degree vertex.
std::vector<int> search_order(const MoleculeGraph& pat) {
  const int n = static_cast<int>(pat.atoms.size());
  std::vector<std::vector<int>> nbrs(n);
  for (const auto& b : pat.bonds) {
    nbrs[b.a].push_back(b.b);
    nbrs[b.b].push_back(b.a);
  }
  int root = 0;
  for (int i = 1; i < n; ++i) {
    if (nbrs[i].size() > nbrs[root].size()) root = i;
  }
  std::vector<int> order;
  std::vector<char> placed(n, 0);
  order.push_back(root);
  placed[root] = 1;
  for (size_t k = 0; k < order.size(); ++k) {
    for (int w : nbrs[order[k]]) {
      if (!placed[w]) {
        placed[w] = 1;
        order.push_back(w);
      }
    }
  }
  for (int i = 0; i < n; ++i) {  // disconnected patterns would be authoring bugs
    if (!placed[i]) order.push_back(i);
  }
  return order;
}

}  // namespace

long count_monomorphisms(const MoleculeGraph& pattern, const MoleculeGraph& mol) {
  const int pn = static_cast<int>(pattern.atoms.size());
  if (pn == 0 || pattern.atoms.size() > mol.atoms.size()) return 0;
  TargetIndex target(mol);
  auto pat_arom = bond_aromatic_atoms(pattern);

  std::vector<std::vector<std::pair<int, const BondRecord*>>> pat_nbrs(pn);
  for (const auto& b : pattern.bonds) {
    pat_nbrs[b.a].push_back({b.b, &b});
    pat_nbrs[b.b].push_back({b.a, &b});
  }
  auto order = search_order(pattern);
  std::vector<int> pos(pn);  // pattern vertex -> position in the order
  for (int k = 0; k < pn; ++k) pos[order[k]] = k;

  std::vector<int> map(pn, -1);
  std::vector<char> used(mol.atoms.size(), 0);
  long count = 0;

  auto compatible_atom = [&](int p, int t) {
    return pattern.atoms[p].z == mol.atoms[t].z && pat_arom[p] == target.arom[t] &&
           target.nbrs[t].size() >= pat_nbrs[p].size();
  };

  std::function<void(int)> extend = [&](int k) {
    if (k == pn) {
      ++count;
      return;
    }
    int p = order[k];
    // Anchor on an already-mapped pattern neighbor when one exists.
    int anchor = -1;
    const BondRecord* anchor_bond = nullptr;
    for (auto [pw, pb] : pat_nbrs[p]) {
      if (pos[pw] < k) {
        anchor = pw;
        anchor_bond = pb;
        break;
      }
    }
    auto try_atom = [&](int t) {
      if (used[t] || !compatible_atom(p, t)) return;
      for (auto [pw, pb] : pat_nbrs[p]) {
        if (pos[pw] >= k) continue;
        int tw = map[pw];
        bool ok = false;
        for (auto [tn, tbi] : target.nbrs[t]) {
          if (tn == tw && bond_compatible(*pb, mol.bonds[tbi])) {
            ok = true;
            break;
          }
        }
        if (!ok) return;
      }
      used[t] = 1;
      map[p] = t;
      extend(k + 1);
      used[t] = 0;
      map[p] = -1;
    };
    if (anchor >= 0) {
      for (auto [tn, tbi] : target.nbrs[map[anchor]]) {
        if (bond_compatible(*anchor_bond, mol.bonds[tbi])) try_atom(tn);
      }
    } else {
      for (int t = 0; t < static_cast<int>(mol.atoms.size()); ++t) try_atom(t);
    }
  };
  extend(0);
  return count;
}

std::vector<FunctionalGroupPattern> parse_functional_groups(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw Error(std::string("functional group library: ") + e.what());
  }
  if (!doc.contains("groups") || !doc["groups"].is_array()) {
    throw Error("functional group library: missing groups array");
  }
  std::vector<FunctionalGroupPattern> out;
  for (const auto& g : doc["groups"]) {
    FunctionalGroupPattern p;
    p.id = g.at("id").get<std::string>();
    for (const auto& a : g.at("atoms")) {
      AtomRecord atom;
      auto sym = a.at("el").get<std::string>();
      auto z = element_from_symbol(sym);
      if (!z) throw Error("functional group library: unknown element " + sym + " in " + p.id);
      atom.z = *z;
      atom.charge = a.value("charge", 0);
      p.graph.atoms.push_back(atom);
    }
    for (const auto& b : g.at("bonds")) {
      BondRecord bond;
      bond.a = b.at("a").get<int>();
      bond.b = b.at("b").get<int>();
      bond.order = b.value("order", 1);
      bond.aromatic = b.value("arom", false);
      int n = static_cast<int>(p.graph.atoms.size());
      if (bond.a < 0 || bond.b < 0 || bond.a >= n || bond.b >= n || bond.a == bond.b) {
        throw Error("functional group library: bad bond in " + p.id);
      }
      p.graph.bonds.push_back(bond);
    }
    p.graph.name = p.id;
    if (g.contains("anchors")) {
      const auto& an = g["anchors"];
      p.anchor_a = an.value("a", -1);
      p.anchor_b = an.value("b", -1);
      p.anchor_c = an.value("c", -1);
    }
    if (g.contains("c_center")) p.c_center = g["c_center"].get<std::vector<int>>();
    p.occurrences = g.value("occurrences", 0L);
    out.push_back(std::move(p));
  }
  return out;
}

const std::vector<FunctionalGroupPattern>& functional_group_library() {
  static const std::vector<FunctionalGroupPattern> lib =
      parse_functional_groups(embedded::functional_groups_json);
  return lib;
}

std::map<std::string, int> match_functional_groups(
    const MoleculeGraph& mol, const std::vector<FunctionalGroupPattern>& library) {
  std::map<std::string, int> out;
  for (const auto& p : library) {
    long mono = count_monomorphisms(p.graph, mol);
    if (mono == 0) {
      out[p.id] = 0;
      continue;
    }
    long aut = count_monomorphisms(p.graph, p.graph);
    out[p.id] = static_cast<int>(mono / aut);
  }
  return out;
}

}  // namespace pocketeval
