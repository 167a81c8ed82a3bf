#include "pocketeval/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "pocketeval/common.hpp"
#include "pocketeval/distributions.hpp"
#include "pocketeval/elements.hpp"

namespace pocketeval {

long GeometryHistogram::total() const {
  long t = 0;
  for (long c : counts) t += c;
  return t;
}

const std::vector<std::string>& bond_length_keys() {
  static const std::vector<std::string> keys = {"C-C", "C-N", "C-O", "C=C", "C=N", "C=O"};
  return keys;
}

// The published headline list spells three symmetric angles both ways; the
// flat mean over this list therefore weighs them twice, and we keep that.
const std::vector<std::string>& bond_angle_keys() {
  static const std::vector<std::string> keys = {
      "C#C-C", "C-C#N", "C-C-C", "C-C-N", "C-C-O", "C-C=C", "C-C=N", "C-N-C",
      "C-N-N", "C-N-O", "C-N=C", "C-N=N", "C-O-C", "C-O-N", "C=C-N", "C=C=C",
      "N#C-C", "N-C-N", "N-C-O", "N-C=N", "N-C=O", "N-N-O", "N=C-N", "O=C-N"};
  return keys;
}

std::string canonical_angle_key(std::string_view key) {
  std::string fwd(key);
  std::string rev(fwd.rbegin(), fwd.rend());
  return std::min(fwd, rev);
}

namespace {

char order_char(const BondRecord& b) {
  switch (b.order) {
    case 2: return '=';
    case 3: return '#';
    default: return '-';  // single and declared-aromatic both measure as single
  }
}

int clamp_bin(double value, double lo, double width, int nbins) {
  int bin = static_cast<int>(std::floor((value - lo) / width));
  return std::clamp(bin, 0, nbins - 1);
}

GeometryHistogram empty_hist(GeometryHistogram::Kind kind, const std::string& key,
                             double lo, double width, int nbins) {
  GeometryHistogram h;
  h.kind = kind;
  h.key = key;
  h.lo = lo;
  h.width = width;
  h.counts.assign(nbins, 0);
  return h;
}

}  // namespace

std::map<std::string, GeometryHistogram> bond_length_histograms(
    std::span<const MoleculeGraph> mols, const GeometryOptions& opts) {
  const int nbins = static_cast<int>(std::lround((opts.length_hi - opts.length_lo) / opts.length_bin));
  std::map<std::string, GeometryHistogram> out;
  for (const auto& key : bond_length_keys()) {
    out.emplace(key, empty_hist(GeometryHistogram::Kind::BondLength, key, opts.length_lo,
                                opts.length_bin, nbins));
  }
  for (const auto& m : mols) {
    for (const auto& b : m.bonds) {
      char s1 = element_symbol(m.atoms[b.a].z)[0];
      char s2 = element_symbol(m.atoms[b.b].z)[0];
      if (element_symbol(m.atoms[b.a].z).size() > 1 || element_symbol(m.atoms[b.b].z).size() > 1)
        continue;  // two-letter elements have no headline key
      std::string key{std::min(s1, s2), order_char(b), std::max(s1, s2)};
      auto it = out.find(key);
      if (it == out.end()) continue;
      double d = distance(m.atoms[b.a].pos, m.atoms[b.b].pos);
      ++it->second.counts[clamp_bin(d, opts.length_lo, opts.length_bin, nbins)];
    }
  }
  return out;
}

std::map<std::string, GeometryHistogram> bond_angle_histograms(
    std::span<const MoleculeGraph> mols, const GeometryOptions& opts) {
  const int nbins = static_cast<int>(std::lround(180.0 / opts.angle_bin));
  // Collect under canonical keys, then surface every printed spelling.
  std::map<std::string, GeometryHistogram> canon;
  for (const auto& key : bond_angle_keys()) {
    std::string ck = canonical_angle_key(key);
    canon.emplace(ck, empty_hist(GeometryHistogram::Kind::BondAngle, ck, 0.0, opts.angle_bin, nbins));
  }
  for (const auto& m : mols) {
    Adjacency adj(m);
    for (int k = 0; k < static_cast<int>(m.atoms.size()); ++k) {
      const auto& nb = adj.nbrs[k];
      for (size_t i = 0; i < nb.size(); ++i) {
        for (size_t j = i + 1; j < nb.size(); ++j) {
          auto [ai, bi] = nb[i];
          auto [aj, bj] = nb[j];
          const std::string& sj = element_symbol(m.atoms[ai].z);
          const std::string& sk = element_symbol(m.atoms[k].z);
          const std::string& sl = element_symbol(m.atoms[aj].z);
          if (sj.size() > 1 || sk.size() > 1 || sl.size() > 1) continue;
          std::string key;
          key += sj;
          key += order_char(m.bonds[bi]);
          key += sk;
          key += order_char(m.bonds[bj]);
          key += sl;
          auto it = canon.find(canonical_angle_key(key));
          if (it == canon.end()) continue;
          double ang = angle_deg(m.atoms[ai].pos, m.atoms[k].pos, m.atoms[aj].pos);
          ++it->second.counts[clamp_bin(ang, 0.0, opts.angle_bin, nbins)];
        }
      }
    }
  }
  std::map<std::string, GeometryHistogram> out;
  for (const auto& key : bond_angle_keys()) {
    GeometryHistogram h = canon.at(canonical_angle_key(key));
    h.key = key;
    out.emplace(key, std::move(h));
  }
  return out;
}

double geometry_jsd(const GeometryHistogram& gen, const GeometryHistogram& ref) {
  if (gen.kind != ref.kind || canonical_angle_key(gen.key) != canonical_angle_key(ref.key) ||
      gen.counts.size() != ref.counts.size() || gen.lo != ref.lo || gen.width != ref.width) {
    throw Error("geometry jsd over mismatched histograms");
  }
  long tg = gen.total(), tr = ref.total();
  if (tg == 0 || tr == 0) throw Error("geometry jsd over an empty histogram");
  std::vector<double> p(gen.counts.size()), q(ref.counts.size());
  for (size_t i = 0; i < p.size(); ++i) {
    p[i] = double(gen.counts[i]) / double(tg);
    q[i] = double(ref.counts[i]) / double(tr);
  }
  return jsd_vectors(p, q);
}

HeadlineJsd headline_geometry_jsd(const std::map<std::string, GeometryHistogram>& gen,
                                  const std::map<std::string, GeometryHistogram>& ref,
                                  const std::vector<std::string>& keys) {
  HeadlineJsd out;
  double sum = 0;
  for (const auto& key : keys) {
    auto gi = gen.find(key);
    auto ri = ref.find(key);
    if (gi == gen.end() || ri == ref.end() || gi->second.total() == 0 ||
        ri->second.total() == 0) {
      out.skipped.push_back(key);
      continue;
    }
    sum += geometry_jsd(gi->second, ri->second);
    ++out.used;
  }
  out.mean = out.used > 0 ? sum / out.used : 0.0;
  return out;
}

std::vector<char> detect_clashes(const MoleculeGraph& mol, const PocketStructure& pocket,
                                 const ClashOptions& opts) {
  if (pocket.atoms.empty()) throw Error("clash detection against an empty pocket");
  std::vector<char> flags(mol.atoms.size(), 0);

  double max_pocket_vdw = 0;
  for (const auto& a : pocket.atoms) {
    if (a.z != 1) max_pocket_vdw = std::max(max_pocket_vdw, vdw_radius(a.z));
  }
  double max_lig_vdw = 0;
  for (const auto& a : mol.atoms) {
    if (a.z != 1) max_lig_vdw = std::max(max_lig_vdw, vdw_radius(a.z));
  }
  if (max_pocket_vdw == 0 || max_lig_vdw == 0) return flags;
  // The boundary is inclusive: a C-C pair at exactly 3.00 A (overlap 0.40)
  // must flag even though the subtraction lands a few ulps short of 0.4.
  constexpr double kBoundaryEps = 1e-9;
  // Largest separation that can still clash; also the grid cell edge.
  double reach = max_pocket_vdw + max_lig_vdw - opts.min_overlap + kBoundaryEps;
  if (reach <= 0) return flags;

  auto cell_of = [&](const Vec3& p) {
    return std::array<long, 3>{static_cast<long>(std::floor(p.x / reach)),
                               static_cast<long>(std::floor(p.y / reach)),
                               static_cast<long>(std::floor(p.z / reach))};
  };
  struct CellHash {
    size_t operator()(const std::array<long, 3>& c) const {
      size_t h = std::hash<long>()(c[0]);
      h = h * 1000003u ^ std::hash<long>()(c[1]);
      h = h * 1000003u ^ std::hash<long>()(c[2]);
      return h;
    }
  };
  std::unordered_map<std::array<long, 3>, std::vector<int>, CellHash> grid;
  for (int i = 0; i < static_cast<int>(pocket.atoms.size()); ++i) {
    if (pocket.atoms[i].z == 1) continue;
    grid[cell_of(pocket.atoms[i].pos)].push_back(i);
  }

  for (int i = 0; i < static_cast<int>(mol.atoms.size()); ++i) {
    if (mol.atoms[i].z == 1) continue;
    double ri = vdw_radius(mol.atoms[i].z);
    auto c = cell_of(mol.atoms[i].pos);
    bool clash = false;
    for (long dx = -1; dx <= 1 && !clash; ++dx) {
      for (long dy = -1; dy <= 1 && !clash; ++dy) {
        for (long dz = -1; dz <= 1 && !clash; ++dz) {
          auto it = grid.find({c[0] + dx, c[1] + dy, c[2] + dz});
          if (it == grid.end()) continue;
          for (int j : it->second) {
            double overlap = ri + vdw_radius(pocket.atoms[j].z) -
                             distance(mol.atoms[i].pos, pocket.atoms[j].pos);
            if (overlap >= opts.min_overlap - kBoundaryEps) {
              clash = true;
              break;
            }
          }
        }
      }
    }
    flags[i] = clash;
  }
  return flags;
}

double ClashReport::ratio_cca() const {
  return total_atom_count > 0 ? double(clashing_atom_count) / double(total_atom_count) : 0.0;
}

double ClashReport::ratio_cm() const {
  return total_molecules > 0 ? double(molecules_with_clash) / double(total_molecules) : 0.0;
}

void ClashReport::add(const MoleculeGraph& mol, const std::vector<char>& flags) {
  bool any = false;
  for (size_t i = 0; i < mol.atoms.size(); ++i) {
    if (mol.atoms[i].z == 1) continue;
    ++total_atom_count;
    if (i < flags.size() && flags[i]) {
      ++clashing_atom_count;
      any = true;
    }
  }
  ++total_molecules;
  if (any) ++molecules_with_clash;
}

}  // namespace pocketeval
