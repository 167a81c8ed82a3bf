#include "pocketeval/taskbuild.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "json.hpp"
#include "pocketeval/common.hpp"
#include "pocketeval/fragments.hpp"
#include "pocketeval/perception.hpp"

namespace pocketeval {

const char* task_kind_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::DeNovo: return "denovo";
    case TaskKind::Linker: return "linker";
    case TaskKind::Fragment: return "fragment";
    case TaskKind::SideChain: return "sidechain";
    case TaskKind::Scaffold: return "scaffold";
  }
  return "denovo";
}

std::optional<TaskKind> task_kind_from_name(std::string_view name) {
  if (name == "denovo") return TaskKind::DeNovo;
  if (name == "linker") return TaskKind::Linker;
  if (name == "fragment") return TaskKind::Fragment;
  if (name == "sidechain") return TaskKind::SideChain;
  if (name == "scaffold") return TaskKind::Scaffold;
  return std::nullopt;
}

namespace {

bool is_heavy(const MoleculeGraph& mol, int a) { return mol.atoms[a].z != 1; }

bool heavy_bond(const MoleculeGraph& mol, const BondRecord& b) {
  return is_heavy(mol, b.a) && is_heavy(mol, b.b);
}

// Heavy-atom components with up to two bonds removed; hydrogens get -1.
struct Components {
  std::vector<int> comp;   // per atom
  std::vector<int> size;   // per component
  int count = 0;
};

Components components_without(const MoleculeGraph& mol, int skip1, int skip2) {
  Components out;
  out.comp.assign(mol.atoms.size(), -1);
  std::vector<std::vector<int>> adj(mol.atoms.size());
  for (int b = 0; b < int(mol.bonds.size()); ++b) {
    if (b == skip1 || b == skip2) continue;
    const auto& bd = mol.bonds[b];
    if (!heavy_bond(mol, bd)) continue;
    adj[bd.a].push_back(bd.b);
    adj[bd.b].push_back(bd.a);
  }
  for (int s = 0; s < int(mol.atoms.size()); ++s) {
    if (!is_heavy(mol, s) || out.comp[s] >= 0) continue;
    int id = out.count++;
    out.size.push_back(0);
    std::deque<int> queue{s};
    out.comp[s] = id;
    while (!queue.empty()) {
      int a = queue.front();
      queue.pop_front();
      ++out.size[id];
      for (int w : adj[a]) {
        if (out.comp[w] < 0) {
          out.comp[w] = id;
          queue.push_back(w);
        }
      }
    }
  }
  return out;
}

bool heavy_connected(const MoleculeGraph& mol) {
  return components_without(mol, -1, -1).count == 1;
}

// Bonds eligible for cutting: single, between heavy atoms, outside rings.
std::vector<int> cuttable_bonds(const MoleculeGraph& mol) {
  RingInfo rings(mol);
  std::vector<int> out;
  for (int b = 0; b < int(mol.bonds.size()); ++b) {
    const auto& bd = mol.bonds[b];
    if (bd.order != 1 || !heavy_bond(mol, bd) || rings.bond_in_ring[b]) continue;
    out.push_back(b);
  }
  return out;
}

std::vector<int> atoms_of_component(const Components& comps, int id) {
  std::vector<int> out;
  for (int a = 0; a < int(comps.comp.size()); ++a) {
    if (comps.comp[a] == id) out.push_back(a);
  }
  return out;
}

// Atoms on the shortest path between two atoms, restricted to one component.
int shortest_path_atoms(const MoleculeGraph& mol, const Components& comps, int from, int to) {
  if (from == to) return 1;
  int id = comps.comp[from];
  std::map<int, int> dist{{from, 0}};
  std::deque<int> queue{from};
  std::vector<std::vector<int>> adj(mol.atoms.size());
  for (const auto& bd : mol.bonds) {
    if (!heavy_bond(mol, bd)) continue;
    if (comps.comp[bd.a] != id || comps.comp[bd.b] != id) continue;
    adj[bd.a].push_back(bd.b);
    adj[bd.b].push_back(bd.a);
  }
  while (!queue.empty()) {
    int a = queue.front();
    queue.pop_front();
    if (a == to) return dist[a] + 1;
    for (int w : adj[a]) {
      if (!dist.count(w)) {
        dist[w] = dist[a] + 1;
        queue.push_back(w);
      }
    }
  }
  return -1;  // unreachable: caller guarantees same component
}

std::vector<std::array<int, 2>> cut_bond_pairs(const MoleculeGraph& mol,
                                               const std::vector<int>& context) {
  std::vector<char> in_context(mol.atoms.size(), 0);
  for (int a : context) in_context[a] = 1;
  std::vector<std::array<int, 2>> out;
  for (const auto& bd : mol.bonds) {
    if (!heavy_bond(mol, bd)) continue;
    if (in_context[bd.a] && !in_context[bd.b]) out.push_back({bd.a, bd.b});
    else if (in_context[bd.b] && !in_context[bd.a]) out.push_back({bd.b, bd.a});
  }
  std::sort(out.begin(), out.end());
  return out;
}

TaskPartition partition_from(const MoleculeGraph& mol, std::vector<int> context,
                             std::vector<int> masked) {
  TaskPartition p;
  std::sort(context.begin(), context.end());
  std::sort(masked.begin(), masked.end());
  p.cut_bonds = cut_bond_pairs(mol, context);
  p.context_atoms = std::move(context);
  p.masked_atoms = std::move(masked);
  return p;
}

}  // namespace

std::vector<LinkerCut> linker_candidates(const MoleculeGraph& mol, const TaskThresholds& thr) {
  std::vector<LinkerCut> out;
  if (!heavy_connected(mol)) return out;
  auto bonds = cuttable_bonds(mol);
  for (size_t i = 0; i < bonds.size(); ++i) {
    for (size_t j = i + 1; j < bonds.size(); ++j) {
      int bi = bonds[i], bj = bonds[j];
      Components comps = components_without(mol, bi, bj);
      if (comps.count != 3) continue;
      // The middle component touches both cut bonds.
      const auto& d1 = mol.bonds[bi];
      const auto& d2 = mol.bonds[bj];
      int middle = -1;
      for (int end1 : {d1.a, d1.b}) {
        for (int end2 : {d2.a, d2.b}) {
          if (comps.comp[end1] == comps.comp[end2]) middle = comps.comp[end1];
        }
      }
      if (middle < 0) continue;
      int att1 = comps.comp[d1.a] == middle ? d1.a : d1.b;
      int att2 = comps.comp[d2.a] == middle ? d2.a : d2.b;
      int outer1 = comps.comp[d1.a] == middle ? d1.b : d1.a;
      int outer2 = comps.comp[d2.a] == middle ? d2.b : d2.a;
      int ca = comps.comp[outer1], cb = comps.comp[outer2];
      if (comps.size[ca] < thr.min_fragment_atoms || comps.size[cb] < thr.min_fragment_atoms)
        continue;
      if (shortest_path_atoms(mol, comps, att1, att2) < thr.min_linker_atoms) continue;
      LinkerCut cut;
      cut.bond_i = bi;
      cut.bond_j = bj;
      cut.side_a = atoms_of_component(comps, ca);
      cut.side_b = atoms_of_component(comps, cb);
      cut.linker = atoms_of_component(comps, middle);
      if (cut.side_a.size() < cut.side_b.size()) std::swap(cut.side_a, cut.side_b);
      out.push_back(std::move(cut));
    }
  }
  return out;
}

std::optional<LinkerCut> choose_linker_cut(const MoleculeGraph& mol, const TaskThresholds& thr) {
  auto cands = linker_candidates(mol, thr);
  if (cands.empty()) return std::nullopt;
  const LinkerCut* best = &cands[0];
  for (const auto& c : cands) {
    size_t c_min = c.side_b.size(), b_min = best->side_b.size();
    if (c_min > b_min || (c_min == b_min && c.linker.size() < best->linker.size())) {
      best = &c;  // candidates arrive in (bond_i, bond_j) order, ties keep the first
    }
  }
  return *best;
}

std::vector<FragmentCut> fragment_candidates(const MoleculeGraph& mol, const TaskThresholds& thr) {
  std::vector<FragmentCut> out;
  if (!heavy_connected(mol)) return out;
  for (int b : cuttable_bonds(mol)) {
    Components comps = components_without(mol, b, -1);
    if (comps.count != 2) continue;
    auto part_a = atoms_of_component(comps, comps.comp[mol.bonds[b].a]);
    auto part_b = atoms_of_component(comps, comps.comp[mol.bonds[b].b]);
    if (int(part_a.size()) < thr.min_fragment_atoms || int(part_b.size()) < thr.min_fragment_atoms)
      continue;
    FragmentCut cut;
    cut.bond = b;
    bool a_kept;
    if (part_a.size() != part_b.size()) {
      a_kept = part_a.size() < part_b.size();
    } else {
      a_kept = part_a[0] < part_b[0];  // equal sizes: lower atom index decides
    }
    cut.kept = a_kept ? part_a : part_b;
    cut.grown = a_kept ? part_b : part_a;
    if (2 * cut.kept.size() <= cut.grown.size()) continue;  // seed must exceed half
    out.push_back(std::move(cut));
  }
  return out;
}

std::optional<FragmentCut> choose_fragment_cut(const MoleculeGraph& mol,
                                               const TaskThresholds& thr) {
  auto cands = fragment_candidates(mol, thr);
  if (cands.empty()) return std::nullopt;
  const FragmentCut* best = &cands[0];
  for (const auto& c : cands) {
    if (c.kept.size() > best->kept.size()) best = &c;  // ties keep the lowest bond
  }
  return *best;
}

std::optional<TaskPartition> make_task_partition(const MoleculeGraph& mol, TaskKind kind,
                                                 const TaskThresholds& thr,
                                                 std::string* skip_reason) {
  auto skip = [&](const std::string& why) -> std::optional<TaskPartition> {
    if (skip_reason) *skip_reason = why;
    return std::nullopt;
  };
  switch (kind) {
    case TaskKind::DeNovo: {
      std::vector<int> heavy;
      for (int a = 0; a < int(mol.atoms.size()); ++a) {
        if (is_heavy(mol, a)) heavy.push_back(a);
      }
      return partition_from(mol, {}, std::move(heavy));
    }
    case TaskKind::Linker: {
      if (!heavy_connected(mol)) return skip("reference ligand is disconnected");
      auto cut = choose_linker_cut(mol, thr);
      if (!cut) return skip("no linker cut satisfies the size thresholds");
      std::vector<int> context = cut->side_a;
      context.insert(context.end(), cut->side_b.begin(), cut->side_b.end());
      return partition_from(mol, std::move(context), cut->linker);
    }
    case TaskKind::Fragment: {
      if (!heavy_connected(mol)) return skip("reference ligand is disconnected");
      auto cut = choose_fragment_cut(mol, thr);
      if (!cut) return skip("no fragment cut satisfies the size thresholds");
      return partition_from(mol, cut->kept, cut->grown);
    }
    case TaskKind::SideChain:
    case TaskKind::Scaffold: {
      auto murcko = murcko_decompose(mol);
      if (murcko.scaffold_atoms.empty()) return skip("acyclic ligand has no scaffold");
      if (murcko.sidechain_components.empty()) return skip("ligand has no side chains");
      std::vector<int> chains;
      for (const auto& comp : murcko.sidechain_components) {
        chains.insert(chains.end(), comp.begin(), comp.end());
      }
      if (kind == TaskKind::SideChain) {
        return partition_from(mol, murcko.scaffold_atoms, std::move(chains));
      }
      return partition_from(mol, std::move(chains), murcko.scaffold_atoms);
    }
  }
  return skip("unknown task kind");
}

TaskSet build_task_set(const std::vector<std::pair<std::string, const MoleculeGraph*>>& ligands,
                       TaskKind kind, const TaskThresholds& thr, bool all_candidates) {
  TaskSet set;
  for (const auto& [pocket_id, mol] : ligands) {
    if (mol == nullptr) {
      set.skips.push_back({pocket_id, kind, "missing reference ligand"});
      continue;
    }
    int heavy = mol->heavy_atom_count();
    auto push_item = [&](TaskPartition partition) {
      set.items.push_back({pocket_id, kind, std::move(partition), heavy});
    };
    if (all_candidates && kind == TaskKind::Linker) {
      auto cands = linker_candidates(*mol, thr);
      if (cands.empty()) {
        set.skips.push_back({pocket_id, kind, "no linker cut satisfies the size thresholds"});
        continue;
      }
      for (const auto& cut : cands) {
        std::vector<int> context = cut.side_a;
        context.insert(context.end(), cut.side_b.begin(), cut.side_b.end());
        push_item(partition_from(*mol, std::move(context), cut.linker));
      }
      continue;
    }
    if (all_candidates && kind == TaskKind::Fragment) {
      auto cands = fragment_candidates(*mol, thr);
      if (cands.empty()) {
        set.skips.push_back({pocket_id, kind, "no fragment cut satisfies the size thresholds"});
        continue;
      }
      for (const auto& cut : cands) push_item(partition_from(*mol, cut.kept, cut.grown));
      continue;
    }
    std::string reason;
    auto partition = make_task_partition(*mol, kind, thr, &reason);
    if (!partition) {
      set.skips.push_back({pocket_id, kind, reason});
      continue;
    }
    push_item(std::move(*partition));
  }
  return set;
}

std::string write_task_manifest(const TaskSet& set) {
  std::string out;
  for (const auto& item : set.items) {
    nlohmann::ordered_json j;
    j["pocket_id"] = item.pocket_id;
    j["task"] = task_kind_name(item.kind);
    j["ligand_heavy_atoms"] = item.ligand_heavy_atoms;
    j["context_atoms"] = item.partition.context_atoms;
    j["masked_atoms"] = item.partition.masked_atoms;
    auto& cuts = j["cut_bonds"] = nlohmann::ordered_json::array();
    for (const auto& cb : item.partition.cut_bonds) cuts.push_back({cb[0], cb[1]});
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string write_task_skips(const TaskSet& set) {
  std::string out;
  for (const auto& skip : set.skips) {
    nlohmann::ordered_json j;
    j["pocket_id"] = skip.pocket_id;
    j["task"] = task_kind_name(skip.kind);
    j["reason"] = skip.reason;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace pocketeval
