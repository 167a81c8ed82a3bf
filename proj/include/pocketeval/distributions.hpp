#pragma once

#include <span>
#include <string>
#include <vector>

#include "pocketeval/funcgroups.hpp"
#include "pocketeval/mol.hpp"

namespace pocketeval {

struct CategoricalDistribution {
  std::vector<std::string> labels;
  std::vector<double> probabilities;   // sum to 1 unless empty
  std::vector<double> mean_frequency;  // mean count per molecule
  bool empty = false;                  // no countable events in the input set

  size_t size() const { return labels.size(); }
};

// Heavy-atom type distribution over {C,N,O,F,P,S,Cl}. Other elements land in
// an "other" bucket that is excluded from the 7-way normalization but kept in
// mean_frequency. Throws Error on an empty molecule set.
CategoricalDistribution atom_type_distribution(std::span<const MoleculeGraph> mols);

// SSSR ring-size distribution over sizes {3..8}; larger rings pool into 8.
// A set with no rings comes back with empty=true.
CategoricalDistribution ring_type_distribution(std::span<const MoleculeGraph> mols);

// 25-way functional-group distribution; molecules with no match only grow
// the mean_frequency denominator. empty=true when nothing matches at all.
CategoricalDistribution functional_group_distribution(
    std::span<const MoleculeGraph> mols, const std::vector<FunctionalGroupPattern>& library);

// Jensen-Shannon distance between aligned distributions: sqrt of the
// Jensen-Shannon divergence taken with the natural logarithm, so identical
// inputs give 0 and disjoint supports hit the ceiling sqrt(ln 2) = 0.8326.
// This is the form consistent with the published snapshot this toolkit
// reproduces (its tables top out at exactly 0.8326). 0*log(0) := 0.
// Throws Error on label mismatch or empty inputs.
double jsd(const CategoricalDistribution& p, const CategoricalDistribution& q);

// Same functional form over two raw probability vectors (used by geometry
// histograms after normalization).
double jsd_vectors(std::span<const double> p, std::span<const double> q);

// Mean absolute difference of mean_frequency vectors over aligned labels.
double mae_frequency(const CategoricalDistribution& gen, const CategoricalDistribution& ref);

}  // namespace pocketeval
