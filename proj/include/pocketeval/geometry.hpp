#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "pocketeval/mol.hpp"

namespace pocketeval {

struct GeometryHistogram {
  enum class Kind { BondLength, BondAngle } kind = Kind::BondLength;
  std::string key;
  double lo = 0, width = 0;  // bin i spans [lo + i*width, lo + (i+1)*width)
  std::vector<long> counts;

  long total() const;
};

// Fixed headline key sets. The angle list carries both spellings of the three
// symmetric keys exactly as published, so the flat mean weights them twice.
const std::vector<std::string>& bond_length_keys();  // 6 keys
const std::vector<std::string>& bond_angle_keys();   // 24 keys

// Canonical form of a typed key: endpoints ordered so the lexicographically
// smaller (element, order-char) side comes first, e.g. "O=C-N" -> "N-C=O".
std::string canonical_angle_key(std::string_view key);

struct GeometryOptions {
  double length_lo = 0.8, length_hi = 2.0, length_bin = 0.02;  // Angstrom
  double angle_bin = 2.0;                                      // degrees over [0, 180]
};

// One histogram per headline key. Out-of-range values clamp to the edge
// bins. Aromatic-input bonds (order 4) measure as single for key purposes.
std::map<std::string, GeometryHistogram> bond_length_histograms(
    std::span<const MoleculeGraph> mols, const GeometryOptions& opts = {});
std::map<std::string, GeometryHistogram> bond_angle_histograms(
    std::span<const MoleculeGraph> mols, const GeometryOptions& opts = {});

// Jensen-Shannon distance between two same-key histograms after count
// normalization; throws Error on kind/key/binning mismatch or when either
// histogram is empty.
double geometry_jsd(const GeometryHistogram& gen, const GeometryHistogram& ref);

struct HeadlineJsd {
  double mean = 0;
  int used = 0;                       // keys that entered the mean
  std::vector<std::string> skipped;   // empty-histogram keys, with a warning each
};

// Unweighted mean of geometry_jsd over the fixed key list; keys empty on
// either side are excluded and reported.
HeadlineJsd headline_geometry_jsd(const std::map<std::string, GeometryHistogram>& gen,
                                  const std::map<std::string, GeometryHistogram>& ref,
                                  const std::vector<std::string>& keys);

struct ClashOptions {
  // vdW(i) + vdW(j) - dist >= min_overlap flags a clash. The comparison
  // tolerates ~1e-9 so the inclusive boundary survives float subtraction.
  double min_overlap = 0.4;
};

// Per-heavy-atom clash flags against pocket heavy atoms. Grid-accelerated but
// exactly equal to the brute-force pair scan. Hydrogens never flag. Throws
// Error on an empty pocket.
std::vector<char> detect_clashes(const MoleculeGraph& mol, const PocketStructure& pocket,
                                 const ClashOptions& opts = {});

struct ClashReport {
  long clashing_atom_count = 0;
  long total_atom_count = 0;
  long molecules_with_clash = 0;
  long total_molecules = 0;

  double ratio_cca() const;  // pooled clashing atoms / pooled heavy atoms
  double ratio_cm() const;   // molecules with any clash / molecules
  // Heavy atoms only enter the counts; hydrogens never clash by definition.
  void add(const MoleculeGraph& mol, const std::vector<char>& flags);
};

}  // namespace pocketeval
