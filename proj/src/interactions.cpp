#include "pocketeval/interactions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pocketeval/elements.hpp"
#include "pocketeval/perception.hpp"

namespace pocketeval {

const std::array<std::string, kInteractionTypeCount>& interaction_type_names() {
  static const std::array<std::string, kInteractionTypeCount> names = {
      "hydrophobic", "hbond", "water_bridge", "pi_stacking", "pi_cation", "halogen", "metal"};
  return names;
}

namespace {

using NameSet = std::set<std::string>;

// Side-chain carbons whose template neighbors are all carbon or hydrogen.
const std::map<std::string, NameSet>& hydrophobic_names() {
  static const std::map<std::string, NameSet> t = {
      {"ALA", {"CB"}},
      {"ARG", {"CB", "CG"}},
      {"ASN", {"CB"}},
      {"ASP", {"CB"}},
      {"GLN", {"CB", "CG"}},
      {"GLU", {"CB", "CG"}},
      {"ILE", {"CB", "CG1", "CG2", "CD1"}},
      {"LEU", {"CB", "CG", "CD1", "CD2"}},
      {"LYS", {"CB", "CG", "CD"}},
      {"MET", {"CB"}},
      {"PHE", {"CB", "CG", "CD1", "CD2", "CE1", "CE2", "CZ"}},
      {"PRO", {"CB", "CG"}},
      {"THR", {"CG2"}},
      {"TRP", {"CB", "CG", "CD2", "CE3", "CZ2", "CZ3", "CH2"}},
      {"TYR", {"CB", "CG", "CD1", "CD2", "CE1", "CE2"}},
      {"VAL", {"CB", "CG1", "CG2"}},
  };
  return t;
}

const std::map<std::string, NameSet>& sidechain_donor_names() {
  static const std::map<std::string, NameSet> t = {
      {"ARG", {"NE", "NH1", "NH2"}}, {"ASN", {"ND2"}},         {"GLN", {"NE2"}},
      {"HIS", {"ND1", "NE2"}},       {"LYS", {"NZ"}},          {"SER", {"OG"}},
      {"THR", {"OG1"}},              {"TRP", {"NE1"}},         {"TYR", {"OH"}},
  };
  return t;
}

const std::map<std::string, NameSet>& sidechain_acceptor_names() {
  static const std::map<std::string, NameSet> t = {
      {"ASN", {"OD1"}},          {"ASP", {"OD1", "OD2"}}, {"GLN", {"OE1"}},
      {"GLU", {"OE1", "OE2"}},   {"HIS", {"ND1", "NE2"}}, {"SER", {"OG"}},
      {"THR", {"OG1"}},          {"TYR", {"OH"}},
  };
  return t;
}

// Aromatic side-chain rings as ordered atom-name cycles; a residue only
// contributes a ring when every member atom is present in the pocket.
const std::map<std::string, std::vector<std::vector<std::string>>>& ring_names() {
  static const std::map<std::string, std::vector<std::vector<std::string>>> t = {
      {"PHE", {{"CG", "CD1", "CE1", "CZ", "CE2", "CD2"}}},
      {"TYR", {{"CG", "CD1", "CE1", "CZ", "CE2", "CD2"}}},
      {"HIS", {{"CG", "ND1", "CE1", "NE2", "CD2"}}},
      {"TRP",
       {{"CG", "CD1", "NE1", "CE2", "CD2"},
        {"CD2", "CE2", "CZ2", "CH2", "CZ3", "CE3"}}},
  };
  return t;
}

bool in_table(const std::map<std::string, NameSet>& table, const std::string& res,
              const std::string& atom) {
  auto it = table.find(res);
  return it != table.end() && it->second.count(atom) > 0;
}

struct Ring {
  std::vector<Vec3> pts;
  Vec3 centroid{};
  Vec3 normal{};
};

Ring make_ring(std::vector<Vec3> pts) {
  Ring r;
  r.pts = std::move(pts);
  for (const auto& p : r.pts) r.centroid = r.centroid + p;
  r.centroid = r.centroid / double(r.pts.size());
  Vec3 n{};
  for (size_t i = 0; i < r.pts.size(); ++i) {
    Vec3 a = r.pts[i] - r.centroid;
    Vec3 b = r.pts[(i + 1) % r.pts.size()] - r.centroid;
    n = n + a.cross(b);
  }
  r.normal = n.normalized();
  return r;
}

// Interplanar angle folded into [0, 90].
double plane_angle(const Ring& a, const Ring& b) {
  double c = std::fabs(a.normal.dot(b.normal));
  c = std::clamp(c, 0.0, 1.0);
  return std::acos(c) * 180.0 / M_PI;
}

struct PocketView {
  const PocketStructure& pocket;
  std::vector<int> hydrophobic;               // atom indices
  std::vector<int> donors;                    // atom indices
  std::vector<int> acceptors;                 // atom indices
  std::vector<Ring> rings;
  std::vector<Vec3> cations;                  // LYS NZ / ARG CZ positions

  explicit PocketView(const PocketStructure& p) : pocket(p) {
    // Per-residue name -> atom index, first occurrence wins.
    std::vector<std::map<std::string, int>> by_res(p.residue_count());
    for (int i = 0; i < int(p.atoms.size()); ++i) {
      if (p.atoms[i].z == 1) continue;
      int r = p.residue_of[i];
      if (r < 0 || r >= p.residue_count()) continue;
      by_res[r].emplace(p.atom_names[i], i);
    }
    for (int r = 0; r < p.residue_count(); ++r) {
      const std::string& aa = p.amino_acid_of[r];
      for (const auto& [name, idx] : by_res[r]) {
        int z = p.atoms[idx].z;
        if (z == 6 && in_table(hydrophobic_names(), aa, name)) hydrophobic.push_back(idx);
        // Backbone amide: every residue donates through N except proline and
        // accepts through the carbonyl O (plus a terminal OXT when present).
        bool donor = (name == "N" && z == 7 && aa != "PRO") ||
                     ((z == 7 || z == 8) && in_table(sidechain_donor_names(), aa, name));
        bool acceptor = ((name == "O" || name == "OXT") && z == 8) ||
                        ((z == 7 || z == 8) && in_table(sidechain_acceptor_names(), aa, name));
        if (donor) donors.push_back(idx);
        if (acceptor) acceptors.push_back(idx);
        if (aa == "LYS" && name == "NZ" && z == 7) cations.push_back(p.atoms[idx].pos);
        if (aa == "ARG" && name == "CZ" && z == 6) cations.push_back(p.atoms[idx].pos);
      }
      auto rit = ring_names().find(aa);
      if (rit == ring_names().end()) continue;
      for (const auto& cycle : rit->second) {
        std::vector<Vec3> pts;
        for (const auto& nm : cycle) {
          auto ait = by_res[r].find(nm);
          if (ait == by_res[r].end()) break;
          pts.push_back(p.atoms[ait->second].pos);
        }
        if (pts.size() == cycle.size()) rings.push_back(make_ring(std::move(pts)));
      }
    }
  }
};

struct LigandView {
  const MoleculeGraph& mol;
  Adjacency adj;
  std::vector<char> hydrophobic;  // carbon with all-carbon heavy neighbors
  std::vector<char> donor;        // N/O with any hydrogen
  std::vector<char> acceptor;     // N/O
  std::vector<std::vector<int>> explicit_h;  // per atom
  std::vector<Ring> rings;

  explicit LigandView(const MoleculeGraph& m) : mol(m), adj(m) {
    int n = int(m.atoms.size());
    hydrophobic.assign(n, 0);
    donor.assign(n, 0);
    acceptor.assign(n, 0);
    explicit_h.assign(n, {});
    for (int a = 0; a < n; ++a) {
      for (auto [w, bi] : adj.nbrs[a]) {
        (void)bi;
        if (m.atoms[w].z == 1) explicit_h[a].push_back(w);
      }
    }
    for (int a = 0; a < n; ++a) {
      int z = m.atoms[a].z;
      if (z == 6) {
        bool apolar = true;
        for (auto [w, bi] : adj.nbrs[a]) {
          (void)bi;
          if (m.atoms[w].z != 1 && m.atoms[w].z != 6) apolar = false;
        }
        hydrophobic[a] = apolar;
      }
      if (z == 7 || z == 8) {
        acceptor[a] = 1;
        int h = int(explicit_h[a].size()) + implicit_hydrogens(m, adj, a);
        donor[a] = h > 0;
      }
    }
    // Aromatic rings: SSSR cycles whose every edge carries the aromatic flag.
    std::map<std::pair<int, int>, int> bond_of;
    for (int b = 0; b < int(m.bonds.size()); ++b) {
      bond_of[{std::min(m.bonds[b].a, m.bonds[b].b), std::max(m.bonds[b].a, m.bonds[b].b)}] = b;
    }
    for (const auto& cycle : find_rings(m)) {
      bool arom = true;
      for (size_t i = 0; i < cycle.size() && arom; ++i) {
        int u = cycle[i], v = cycle[(i + 1) % cycle.size()];
        auto it = bond_of.find({std::min(u, v), std::max(u, v)});
        arom = it != bond_of.end() && m.bonds[it->second].aromatic;
      }
      if (!arom) continue;
      std::vector<Vec3> pts;
      for (int a : cycle) pts.push_back(m.atoms[a].pos);
      rings.push_back(make_ring(std::move(pts)));
    }
  }
};

}  // namespace

InteractionProfile profile_interactions(const MoleculeGraph& ligand,
                                        const PocketStructure& pocket,
                                        const InteractionOptions& opts) {
  InteractionProfile out{};
  if (ligand.atoms.empty() || pocket.atoms.empty()) return out;
  LigandView lig(ligand);
  PocketView pkt(pocket);

  // Hydrophobic, reduced twice: closest pocket partner per ligand atom, then
  // closest surviving pair per pocket residue.
  {
    struct Pair {
      int lig, pkt;
      double d;
    };
    std::vector<Pair> best_per_lig;
    for (int i = 0; i < int(ligand.atoms.size()); ++i) {
      if (!lig.hydrophobic[i]) continue;
      int best = -1;
      double bd = 0;
      for (int j : pkt.hydrophobic) {
        double d = distance(ligand.atoms[i].pos, pocket.atoms[j].pos);
        if (d > opts.hydrophobic_max_dist) continue;
        if (best < 0 || d < bd) {
          best = j;
          bd = d;
        }
      }
      if (best >= 0) best_per_lig.push_back({i, best, bd});
    }
    std::map<int, Pair> best_per_res;
    for (const auto& pr : best_per_lig) {
      int res = pocket.residue_of[pr.pkt];
      auto it = best_per_res.find(res);
      if (it == best_per_res.end() || pr.d < it->second.d) best_per_res[res] = pr;
    }
    out[size_t(InteractionType::Hydrophobic)] = double(best_per_res.size());
  }

  // Hydrogen bonds, both directions, each ligand-pocket atom pair at most
  // once. Pocket donors pass on distance alone: protein hydrogens and bonds
  // are not materialized, so there is no angle to measure on that side.
  {
    std::set<std::pair<int, int>> pairs;
    auto lig_donor_geometry_ok = [&](int d, const Vec3& acc) {
      if (!lig.explicit_h[d].empty()) {
        for (int h : lig.explicit_h[d]) {
          if (angle_deg(ligand.atoms[d].pos, ligand.atoms[h].pos, acc) >= opts.hbond_min_angle)
            return true;
        }
        return false;
      }
      for (auto [w, bi] : lig.adj.nbrs[d]) {
        (void)bi;
        if (ligand.atoms[w].z == 1) continue;
        if (angle_deg(ligand.atoms[w].pos, ligand.atoms[d].pos, acc) < opts.hbond_heavy_min_angle)
          return false;
      }
      return true;
    };
    for (int i = 0; i < int(ligand.atoms.size()); ++i) {
      if (!lig.donor[i]) continue;
      for (int j : pkt.acceptors) {
        if (distance(ligand.atoms[i].pos, pocket.atoms[j].pos) > opts.hbond_max_dist) continue;
        if (!lig_donor_geometry_ok(i, pocket.atoms[j].pos)) continue;
        pairs.insert({i, j});
      }
    }
    for (int j : pkt.donors) {
      for (int i = 0; i < int(ligand.atoms.size()); ++i) {
        if (!lig.acceptor[i]) continue;
        if (distance(ligand.atoms[i].pos, pocket.atoms[j].pos) > opts.hbond_max_dist) continue;
        pairs.insert({i, j});
      }
    }
    out[size_t(InteractionType::HydrogenBond)] = double(pairs.size());
  }

  // Pi stacking: parallel within the tolerance or T-shaped within the same
  // tolerance of perpendicular.
  for (const auto& lr : lig.rings) {
    for (const auto& pr : pkt.rings) {
      if (distance(lr.centroid, pr.centroid) > opts.pistack_max_dist) continue;
      double ang = plane_angle(lr, pr);
      if (ang <= opts.pistack_plane_tol || ang >= 90.0 - opts.pistack_plane_tol) {
        out[size_t(InteractionType::PiStacking)] += 1.0;
      }
    }
  }

  // Pi-cation: pocket side chains (LYS NZ, ARG CZ) against ligand rings and
  // positively charged ligand atoms against pocket rings.
  for (const auto& lr : lig.rings) {
    for (const auto& c : pkt.cations) {
      if (distance(lr.centroid, c) <= opts.pication_max_dist) {
        out[size_t(InteractionType::PiCation)] += 1.0;
      }
    }
  }
  for (int i = 0; i < int(ligand.atoms.size()); ++i) {
    if (ligand.atoms[i].z == 1 || ligand.atoms[i].charge <= 0) continue;
    for (const auto& pr : pkt.rings) {
      if (distance(ligand.atoms[i].pos, pr.centroid) <= opts.pication_max_dist) {
        out[size_t(InteractionType::PiCation)] += 1.0;
      }
    }
  }

  // Halogen bonds: ligand C-X (X = Cl/Br/I) pointing at a pocket acceptor.
  for (int i = 0; i < int(ligand.atoms.size()); ++i) {
    int z = ligand.atoms[i].z;
    if (z != 17 && z != 35 && z != 53) continue;
    int carbon = -1;
    for (auto [w, bi] : lig.adj.nbrs[i]) {
      (void)bi;
      if (ligand.atoms[w].z == 6) {
        carbon = w;
        break;
      }
    }
    if (carbon < 0) continue;
    for (int j : pkt.acceptors) {
      if (distance(ligand.atoms[i].pos, pocket.atoms[j].pos) > opts.halogen_max_dist) continue;
      if (angle_deg(ligand.atoms[carbon].pos, ligand.atoms[i].pos, pocket.atoms[j].pos) <
          opts.halogen_min_angle)
        continue;
      out[size_t(InteractionType::Halogen)] += 1.0;
    }
  }

  // Water bridges and metal coordination stay zero: the pocket model carries
  // neither solvent nor ions.
  return out;
}

InteractionProfile mean_profile(std::span<const InteractionProfile> profiles) {
  InteractionProfile out{};
  if (profiles.empty()) return out;
  for (const auto& p : profiles) {
    for (size_t k = 0; k < kInteractionTypeCount; ++k) out[k] += p[k];
  }
  for (size_t k = 0; k < kInteractionTypeCount; ++k) out[k] /= double(profiles.size());
  return out;
}

InteractionProfile normalize_profile(const InteractionProfile& p, bool* degenerate) {
  InteractionProfile out{};
  double total = 0;
  for (double v : p) total += v;
  if (degenerate) *degenerate = total <= 0;
  if (total <= 0) return out;
  for (size_t k = 0; k < kInteractionTypeCount; ++k) out[k] = p[k] / total;
  return out;
}

}  // namespace pocketeval
