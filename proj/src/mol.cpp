#include "pocketeval/mol.hpp"

#include <algorithm>

#include "pocketeval/common.hpp"

namespace pocketeval {

double angle_deg(const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec3 u = a - b, v = c - b;
  double nu = u.norm(), nv = v.norm();
  if (nu == 0 || nv == 0) return 0;
  double cosang = u.dot(v) / (nu * nv);
  cosang = std::clamp(cosang, -1.0, 1.0);
  return std::acos(cosang) * 180.0 / 3.14159265358979323846;
}

int MoleculeGraph::heavy_atom_count() const {
  int n = 0;
  for (const auto& a : atoms) {
    if (a.z != 1) ++n;
  }
  return n;
}

bool MoleculeGraph::has_bond(int i, int j) const {
  for (const auto& b : bonds) {
    if ((b.a == i && b.b == j) || (b.a == j && b.b == i)) return true;
  }
  return false;
}

Adjacency::Adjacency(const MoleculeGraph& mol) : nbrs(mol.atoms.size()) {
  for (size_t k = 0; k < mol.bonds.size(); ++k) {
    const auto& b = mol.bonds[k];
    if (b.a < 0 || b.b < 0 || b.a >= static_cast<int>(mol.atoms.size()) ||
        b.b >= static_cast<int>(mol.atoms.size())) {
      throw Error("bond endpoint out of range");
    }
    nbrs[b.a].emplace_back(b.b, static_cast<int>(k));
    nbrs[b.b].emplace_back(b.a, static_cast<int>(k));
  }
}

}  // namespace pocketeval
