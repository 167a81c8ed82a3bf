#include "pocketeval/fragments.hpp"

#include <algorithm>
#include <queue>

#include "pocketeval/perception.hpp"

namespace pocketeval {

MurckoDecomposition murcko_decompose(const MoleculeGraph& mol) {
  const int n = static_cast<int>(mol.atoms.size());
  MurckoDecomposition out;

  // Heavy-atom graph only.
  std::vector<std::vector<int>> nbrs(n);
  for (const auto& b : mol.bonds) {
    if (mol.atoms[b.a].z == 1 || mol.atoms[b.b].z == 1) continue;
    nbrs[b.a].push_back(b.b);
    nbrs[b.b].push_back(b.a);
  }

  std::vector<char> removed(n, 0);
  std::vector<int> deg(n, 0);
  std::queue<int> q;
  for (int i = 0; i < n; ++i) {
    if (mol.atoms[i].z == 1) {
      removed[i] = 1;  // hydrogens belong to no partition
      continue;
    }
    deg[i] = static_cast<int>(nbrs[i].size());
    if (deg[i] <= 1) q.push(i);
  }
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    if (removed[v] || deg[v] > 1) continue;
    removed[v] = 1;
    for (int w : nbrs[v]) {
      if (!removed[w] && --deg[w] == 1) q.push(w);
    }
  }

  for (int i = 0; i < n; ++i) {
    if (mol.atoms[i].z != 1 && !removed[i]) out.scaffold_atoms.push_back(i);
  }
  out.acyclic = out.scaffold_atoms.empty();

  // Side chains: connected components of the pruned heavy atoms.
  std::vector<char> grouped(n, 0);
  for (int s = 0; s < n; ++s) {
    if (mol.atoms[s].z == 1 || !removed[s] || grouped[s]) continue;
    std::vector<int> comp;
    std::queue<int> bfs;
    bfs.push(s);
    grouped[s] = 1;
    while (!bfs.empty()) {
      int v = bfs.front();
      bfs.pop();
      comp.push_back(v);
      for (int w : nbrs[v]) {
        if (mol.atoms[w].z != 1 && removed[w] && !grouped[w]) {
          grouped[w] = 1;
          bfs.push(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.sidechain_components.push_back(std::move(comp));
  }
  std::sort(out.sidechain_components.begin(), out.sidechain_components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  if (!out.acyclic) {
    RingInfo rings(mol);
    for (int a : out.scaffold_atoms) {
      if (!rings.atom_in_ring[a]) out.linker_atoms.push_back(a);
    }
  }
  return out;
}

}  // namespace pocketeval
