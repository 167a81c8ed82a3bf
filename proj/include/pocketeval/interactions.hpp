#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pocketeval/mol.hpp"

namespace pocketeval {

// Seven interaction families, fixed order used everywhere a profile is
// serialized. Water bridges and metal coordination need solvent/ion records
// the pocket files do not carry, so those two slots stay zero by design.
enum class InteractionType {
  Hydrophobic = 0,
  HydrogenBond,
  WaterBridge,
  PiStacking,
  PiCation,
  Halogen,
  Metal,
};
inline constexpr std::size_t kInteractionTypeCount = 7;
const std::array<std::string, kInteractionTypeCount>& interaction_type_names();

using InteractionProfile = std::array<double, kInteractionTypeCount>;

struct InteractionOptions {
  double hydrophobic_max_dist = 4.0;    // apolar C...C
  double hbond_max_dist = 3.5;          // donor...acceptor heavy
  double hbond_min_angle = 140.0;       // D-H...A when H present
  double hbond_heavy_min_angle = 90.0;  // neighbor-D...A fallback without H
  double pistack_max_dist = 5.5;        // ring centroid...centroid
  double pistack_plane_tol = 30.0;      // parallel: <=30, T-shaped: 60..90
  double pication_max_dist = 6.0;
  double halogen_max_dist = 4.0;
  double halogen_min_angle = 140.0;     // C-X...acceptor
};

// Counts per interaction family for one ligand against its pocket.
// Hydrophobic contacts are reduced: closest pocket atom per ligand atom,
// then closest ligand atom per residue, so a greasy chain does not flood
// the tally. The ligand's aromatic rings come from its bond flags.
InteractionProfile profile_interactions(const MoleculeGraph& ligand,
                                        const PocketStructure& pocket,
                                        const InteractionOptions& opts = {});

// Mean per-type counts over a set of profiles (empty input -> all zero).
InteractionProfile mean_profile(std::span<const InteractionProfile> profiles);

// Normalized (sums to 1) copy; all-zero input stays all-zero and sets *degenerate.
InteractionProfile normalize_profile(const InteractionProfile& p, bool* degenerate = nullptr);

}  // namespace pocketeval
