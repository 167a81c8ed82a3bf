#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pocketeval {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    double n = norm();
    return n > 0 ? *this / n : Vec3{};
  }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

// Angle a-b-c at vertex b, degrees in [0, 180].
double angle_deg(const Vec3& a, const Vec3& b, const Vec3& c);

struct AtomRecord {
  int z = 6;        // atomic number
  Vec3 pos{};
  int charge = 0;   // formal charge
};

// order is the integer bond order 1/2/3; 4 marks a bond that was declared
// aromatic by the input with no kekulized order available. The aromatic flag
// is set independently by aromaticity perception and never rewrites order,
// so kekulized inputs keep their alternating orders.
struct BondRecord {
  int a = 0, b = 0;
  int order = 1;
  bool aromatic = false;
};

struct MoleculeGraph {
  std::string name;
  std::vector<AtomRecord> atoms;
  std::vector<BondRecord> bonds;

  int heavy_atom_count() const;
  bool has_bond(int i, int j) const;
};

// Neighbor lists, (neighbor atom index, bond index) per atom.
struct Adjacency {
  std::vector<std::vector<std::pair<int, int>>> nbrs;
  explicit Adjacency(const MoleculeGraph& mol);
  int degree(int atom) const { return static_cast<int>(nbrs[atom].size()); }
};

struct PocketStructure {
  std::string name;
  std::vector<AtomRecord> atoms;
  std::vector<int> residue_of;               // atom -> residue index
  std::vector<std::string> amino_acid_of;    // residue -> three-letter code, "UNK" if unrecognized
  // PDB atom names per atom ("CA", "OD1", ...). Auxiliary: the interaction
  // profiler types pocket atoms by residue templates since protein bonds are
  // never materialized.
  std::vector<std::string> atom_names;

  int residue_count() const { return static_cast<int>(amino_acid_of.size()); }
};

}  // namespace pocketeval
