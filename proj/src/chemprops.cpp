#include "pocketeval/chemprops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "pocketeval/common.hpp"
#include "pocketeval/elements.hpp"
#include "pocketeval/perception.hpp"

namespace pocketeval {
namespace {

// Reduced Wildman-Crippen atom contribution set. Class selection happens in
// code below; the constants keep the published per-class values. Classes the
// reduced set drops fall through to the element defaults (CS/NS/OS/HS).
constexpr double kC1 = 0.1441, kC2 = 0.0000, kC3 = -0.2035, kC4 = -0.2051;
constexpr double kC5 = -0.2783, kC6 = 0.1551, kC7 = 0.0017, kC8 = 0.08452;
constexpr double kC10 = -0.0516, kC11 = 0.1193, kC12 = -0.0967;
constexpr double kC14 = 0.0000, kC15 = 0.2450, kC18 = 0.1581, kC19 = 0.2955;
constexpr double kC20 = 0.2713, kC21 = 0.1360, kC22 = 0.4619, kC23 = 0.5437;
constexpr double kC24 = 0.1893, kC25 = -0.8186, kC26 = 0.2640, kC27 = 0.2148;
constexpr double kCS = 0.08129;
constexpr double kH1 = 0.1230, kH2 = -0.2677, kH3 = 0.2142, kH4 = 0.2980;
constexpr double kHS = 0.1125;
constexpr double kN1 = -1.0190, kN2 = -0.7096, kN3 = -1.0270, kN4 = -0.5188;
constexpr double kN5 = 0.08387, kN6 = 0.1836, kN7 = -0.3187, kN8 = -0.4458;
constexpr double kN9 = 0.01508, kN11 = -0.3239, kN13 = -0.3396, kN14 = 0.2887;
constexpr double kNS = -0.4806;
constexpr double kO1 = 0.1552, kO2 = -0.2893, kO3 = -0.0684, kO4 = -0.4195;
constexpr double kO5 = 0.0335, kO6 = -0.3339, kO8 = 0.1788, kO9 = -0.1526;
constexpr double kO12 = -1.326, kOS = -0.1188;
constexpr double kF = 0.4202, kCl = 0.6895, kBr = 0.8456, kI = 0.8857;
constexpr double kP = 0.8612, kS1 = 0.6482, kS3 = 0.6237;

struct AtomEnv {
  const MoleculeGraph& mol;
  Adjacency adj;
  std::vector<char> aromatic;     // incident aromatic bond
  std::vector<int> implicit_h;    // per heavy atom
  std::vector<int> explicit_h;    // neighbor count with z == 1

  explicit AtomEnv(const MoleculeGraph& m) : mol(m), adj(m) {
    aromatic.assign(m.atoms.size(), 0);
    for (const auto& b : m.bonds) {
      if (b.aromatic) aromatic[b.a] = aromatic[b.b] = 1;
    }
    implicit_h.resize(m.atoms.size());
    explicit_h.assign(m.atoms.size(), 0);
    for (size_t i = 0; i < m.atoms.size(); ++i) {
      implicit_h[i] = implicit_hydrogens(m, adj, static_cast<int>(i));
      for (auto [w, bi] : adj.nbrs[i]) {
        (void)bi;
        if (m.atoms[w].z == 1) ++explicit_h[i];
      }
    }
  }

  int h_total(int a) const { return implicit_h[a] + explicit_h[a]; }

  int max_order(int a) const {
    int mx = 0;
    for (auto [w, bi] : adj.nbrs[a]) {
      (void)w;
      mx = std::max(mx, mol.bonds[bi].order == 4 ? 1 : mol.bonds[bi].order);
    }
    return mx;
  }

  int count_order(int a, int order) const {
    int c = 0;
    for (auto [w, bi] : adj.nbrs[a]) {
      (void)w;
      c += (mol.bonds[bi].order == order);
    }
    return c;
  }

  // First neighbor over the given bond order, -1 when none.
  int partner_by_order(int a, int order) const {
    for (auto [w, bi] : adj.nbrs[a]) {
      if (mol.bonds[bi].order == order) return w;
    }
    return -1;
  }

  bool has_heavy_neighbor_z(int a, int z) const {
    for (auto [w, bi] : adj.nbrs[a]) {
      (void)bi;
      if (mol.atoms[w].z == z) return true;
    }
    return false;
  }

  bool attached_to_aromatic(int a) const {
    for (auto [w, bi] : adj.nbrs[a]) {
      (void)bi;
      if (mol.atoms[w].z > 1 && aromatic[w]) return true;
    }
    return false;
  }

  bool hetero_attached(int a) const {
    for (auto [w, bi] : adj.nbrs[a]) {
      (void)bi;
      int z = mol.atoms[w].z;
      if (z > 1 && z != 6) return true;
    }
    return false;
  }

  bool carbonyl_carbon(int a) const {
    if (mol.atoms[a].z != 6) return false;
    for (auto [w, bi] : adj.nbrs[a]) {
      if (mol.bonds[bi].order == 2 && mol.atoms[w].z == 8) return true;
    }
    return false;
  }
};

double hydrogen_value(const AtomEnv& env, int heavy) {
  switch (env.mol.atoms[heavy].z) {
    case 6: return kH1;
    case 7: return kH3;
    case 8: {
      // Acid O-H when the oxygen hangs off a carbonyl carbon.
      for (auto [w, bi] : env.adj.nbrs[heavy]) {
        if (env.mol.bonds[bi].order == 1 && env.carbonyl_carbon(w)) return kH4;
      }
      return kH2;
    }
    default: return kHS;
  }
}

double carbon_value(const AtomEnv& env, int a) {
  const auto& mol = env.mol;
  if (env.aromatic[a]) {
    if (env.has_heavy_neighbor_z(a, 9)) return kC14;
    if (env.has_heavy_neighbor_z(a, 17)) return kC15;
    // Exocyclic double bond off an aromatic carbon (pyridone-style).
    for (auto [w, bi] : env.adj.nbrs[a]) {
      if (mol.bonds[bi].order == 2 && !mol.bonds[bi].aromatic && mol.atoms[w].z != 6) return kC25;
    }
    int arom_nbrs = 0;
    bool arom_single = false, to_c = false, to_n = false, to_o = false, to_s = false;
    for (auto [w, bi] : env.adj.nbrs[a]) {
      int z = mol.atoms[w].z;
      if (z == 1) continue;
      if (mol.bonds[bi].aromatic) {
        ++arom_nbrs;
        continue;
      }
      if (env.aromatic[w]) {
        arom_single = true;  // biphenyl-style ring-ring bond
      } else if (z == 6) {
        to_c = true;
      } else if (z == 7) {
        to_n = true;
      } else if (z == 8) {
        to_o = true;
      } else if (z == 16) {
        to_s = true;
      }
    }
    if (arom_nbrs >= 3) return kC19;
    if (arom_single) return kC20;
    if (to_n) return kC22;
    if (to_o) return kC23;
    if (to_s) return kC24;
    if (to_c) return kC21;
    if (env.h_total(a) > 0) return kC18;
    return kCS;
  }

  int doubles = env.count_order(a, 2);
  int triples = env.count_order(a, 3);
  if (triples > 0 || doubles >= 2) return kC7;  // sp carbon
  if (doubles == 1) {
    int w = env.partner_by_order(a, 2);
    if (mol.atoms[w].z != 6) return kC5;  // C=heteroatom
    return env.attached_to_aromatic(a) ? kC26 : kC6;
  }
  // sp3.
  bool exotic = false;
  for (auto [w, bi] : env.adj.nbrs[a]) {
    (void)bi;
    switch (mol.atoms[w].z) {
      case 1: case 6: case 7: case 8: case 9: case 15: case 16: case 17: case 35: case 53:
        break;
      default:
        exotic = true;
    }
  }
  if (exotic) return kC27;
  if (env.attached_to_aromatic(a)) {
    switch (env.h_total(a)) {
      case 3: return kC8;
      case 2: return kC10;
      case 1: return kC11;
      default: return kC12;
    }
  }
  if (env.hetero_attached(a)) return env.h_total(a) >= 1 ? kC3 : kC4;
  return env.h_total(a) >= 2 ? kC1 : kC2;
}

double nitrogen_value(const AtomEnv& env, int a) {
  const auto& mol = env.mol;
  if (env.aromatic[a]) return kN11;
  if (env.count_order(a, 3) > 0) return kN9;
  if (mol.atoms[a].charge > 0) {
    for (auto [w, bi] : env.adj.nbrs[a]) {
      if (mol.bonds[bi].order == 2 && mol.atoms[w].z == 8) return kN14;  // nitro
    }
    return kN13;
  }
  if (mol.atoms[a].charge < 0) return kNS;
  if (env.count_order(a, 2) > 0) return env.h_total(a) >= 1 ? kN5 : kN6;
  bool arom = env.attached_to_aromatic(a);
  switch (env.h_total(a)) {
    case 0: return arom ? kN8 : kN7;
    case 1: return arom ? kN4 : kN2;
    default: return arom ? kN3 : kN1;
  }
}

double oxygen_value(const AtomEnv& env, int a) {
  const auto& mol = env.mol;
  if (env.aromatic[a]) return kO1;
  if (mol.atoms[a].charge < 0) {
    return env.has_heavy_neighbor_z(a, 7) ? kO5 : kO12;  // nitro O- vs carboxylate
  }
  if (env.count_order(a, 2) > 0) {
    int w = env.partner_by_order(a, 2);
    switch (mol.atoms[w].z) {
      case 7: return kO5;
      case 16: return kO6;
      case 6: return env.aromatic[w] ? kO8 : kO9;
      default: return kOS;
    }
  }
  if (env.h_total(a) >= 1) return kO2;
  if (env.has_heavy_neighbor_z(a, 16)) return kO6;
  if (env.attached_to_aromatic(a)) return kO4;
  if (env.adj.nbrs[a].size() >= 2) return kO3;
  return kOS;
}

}  // namespace

double crippen_logp(const MoleculeGraph& mol, std::vector<std::string>* warnings) {
  if (mol.atoms.empty()) throw Error("logp of an empty molecule");
  AtomEnv env(mol);
  double sum = 0;
  for (int a = 0; a < static_cast<int>(mol.atoms.size()); ++a) {
    switch (mol.atoms[a].z) {
      case 1: {
        int heavy = -1;
        for (auto [w, bi] : env.adj.nbrs[a]) {
          (void)bi;
          if (mol.atoms[w].z > 1) heavy = w;
        }
        sum += heavy >= 0 ? hydrogen_value(env, heavy) : kHS;
        break;
      }
      case 6: sum += carbon_value(env, a); break;
      case 7: sum += nitrogen_value(env, a); break;
      case 8: sum += oxygen_value(env, a); break;
      case 9: sum += kF; break;
      case 15: sum += kP; break;
      case 16: sum += env.aromatic[a] ? kS3 : kS1; break;
      case 17: sum += kCl; break;
      case 35: sum += kBr; break;
      case 53: sum += kI; break;
      default:
        if (warnings) {
          warnings->push_back("logp: no contribution class for element " +
                              element_symbol(mol.atoms[a].z) + ", counted as 0");
        }
        break;
    }
    if (mol.atoms[a].z > 1) {
      sum += env.implicit_h[a] * hydrogen_value(env, a);
    }
  }
  return sum;
}

int lipinski_count(double mol_weight, double logp, int hbd, int hba, int rot_bonds) {
  int n = 0;
  n += (mol_weight <= 500.0);
  n += (logp <= 5.0);
  n += (hbd <= 5);
  n += (hba <= 10);
  n += (rot_bonds <= 10);
  return n;
}

bool logp_in_drug_range(double logp) { return logp >= -0.4 && logp <= 5.6; }

int hbd_count(const MoleculeGraph& mol) {
  AtomEnv env(mol);
  int n = 0;
  for (size_t a = 0; a < mol.atoms.size(); ++a) {
    int z = mol.atoms[a].z;
    if ((z == 7 || z == 8) && env.h_total(static_cast<int>(a)) > 0) ++n;
  }
  return n;
}

int hba_count(const MoleculeGraph& mol) {
  int n = 0;
  for (const auto& a : mol.atoms) n += (a.z == 7 || a.z == 8);
  return n;
}

double molecular_weight(const MoleculeGraph& mol) {
  AtomEnv env(mol);
  double w = 0;
  for (size_t a = 0; a < mol.atoms.size(); ++a) {
    w += atomic_mass(mol.atoms[a].z);
    if (mol.atoms[a].z > 1) w += env.implicit_h[a] * atomic_mass(1);
  }
  return w;
}

ChemProfile chem_profile(const MoleculeGraph& mol, std::vector<std::string>* warnings) {
  ChemProfile p;
  p.logp = crippen_logp(mol, warnings);
  p.mol_weight = molecular_weight(mol);
  p.hbd = hbd_count(mol);
  p.hba = hba_count(mol);
  p.rot_bonds = rotatable_bond_count(mol);
  p.lpsk = lipinski_count(p.mol_weight, p.logp, p.hbd, p.hba, p.rot_bonds);
  return p;
}

std::optional<std::pair<double, double>> ExternalProperties::find(const std::string& pocket_id,
                                                                  int ordinal) const {
  auto it = by_pocket_ordinal.find({pocket_scoped ? pocket_id : std::string(), ordinal});
  if (it == by_pocket_ordinal.end()) return std::nullopt;
  return it->second;
}

ExternalProperties parse_property_csv(std::string_view text) {
  ExternalProperties out;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw Error("property csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line == "pocket_id,ordinal,qed,sa") {
    out.pocket_scoped = true;
  } else if (line != "ordinal,qed,sa") {
    throw Error("property csv: expected header 'ordinal,qed,sa' or 'pocket_id,ordinal,qed,sa'");
  }

  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    size_t start = 0;
    while (true) {
      size_t comma = line.find(',', start);
      cols.push_back(line.substr(start, comma == std::string::npos ? std::string::npos
                                                                   : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    size_t expect = out.pocket_scoped ? 4 : 3;
    if (cols.size() != expect) {
      out.issues.push_back("line " + std::to_string(line_no) + ": wrong column count");
      continue;
    }
    size_t c = 0;
    std::string pocket = out.pocket_scoped ? cols[c++] : std::string();
    char* end = nullptr;
    long ordinal = std::strtol(cols[c].c_str(), &end, 10);
    if (end != cols[c].c_str() + cols[c].size() || ordinal < 1) {
      out.issues.push_back("line " + std::to_string(line_no) + ": bad ordinal '" + cols[c] + "'");
      continue;
    }
    ++c;
    double vals[2];
    bool ok = true;
    for (int k = 0; k < 2; ++k, ++c) {
      vals[k] = std::strtod(cols[c].c_str(), &end);
      if (cols[c].empty() || end != cols[c].c_str() + cols[c].size()) {
        out.issues.push_back("line " + std::to_string(line_no) + ": bad number '" + cols[c] + "'");
        ok = false;
        break;
      }
      if (vals[k] < 0.0 || vals[k] > 1.0) {
        out.issues.push_back("line " + std::to_string(line_no) + ": " +
                             (k == 0 ? "qed" : "sa") + " outside [0,1]");
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    out.by_pocket_ordinal[{pocket, static_cast<int>(ordinal)}] = {vals[0], vals[1]};
  }
  return out;
}

}  // namespace pocketeval
