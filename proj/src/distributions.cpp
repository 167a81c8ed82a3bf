#include "pocketeval/distributions.hpp"

#include <cmath>

#include "pocketeval/common.hpp"
#include "pocketeval/elements.hpp"
#include "pocketeval/perception.hpp"

namespace pocketeval {
namespace {

void finalize(CategoricalDistribution& d, const std::vector<double>& counts,
              size_t normalized_upto, size_t n_mols) {
  double total = 0;
  for (size_t i = 0; i < normalized_upto; ++i) total += counts[i];
  d.probabilities.assign(d.labels.size(), 0.0);
  d.mean_frequency.assign(d.labels.size(), 0.0);
  d.empty = (total == 0);
  for (size_t i = 0; i < d.labels.size(); ++i) {
    if (i < normalized_upto && total > 0) d.probabilities[i] = counts[i] / total;
    if (n_mols > 0) d.mean_frequency[i] = counts[i] / double(n_mols);
  }
}

}  // namespace

CategoricalDistribution atom_type_distribution(std::span<const MoleculeGraph> mols) {
  if (mols.empty()) throw Error("atom type distribution over an empty molecule set");
  CategoricalDistribution d;
  d.labels = {"C", "N", "O", "F", "P", "S", "Cl", "other"};
  std::vector<double> counts(d.labels.size(), 0);
  for (const auto& m : mols) {
    for (const auto& a : m.atoms) {
      switch (a.z) {
        case 1: break;  // hydrogens are not counted
        case 6: counts[0] += 1; break;
        case 7: counts[1] += 1; break;
        case 8: counts[2] += 1; break;
        case 9: counts[3] += 1; break;
        case 15: counts[4] += 1; break;
        case 16: counts[5] += 1; break;
        case 17: counts[6] += 1; break;
        default: counts[7] += 1; break;
      }
    }
  }
  // "other" stays outside the 7-way normalization; its probability is 0 by
  // construction and carries no weight in the divergence.
  finalize(d, counts, 7, mols.size());
  return d;
}

CategoricalDistribution ring_type_distribution(std::span<const MoleculeGraph> mols) {
  if (mols.empty()) throw Error("ring type distribution over an empty molecule set");
  CategoricalDistribution d;
  d.labels = {"3", "4", "5", "6", "7", "8"};
  std::vector<double> counts(d.labels.size(), 0);
  for (const auto& m : mols) {
    for (const auto& ring : find_rings(m)) {
      size_t size = ring.size();
      size_t slot = size <= 8 ? size - 3 : 5;  // 9+ pools into the "8" bucket
      counts[slot] += 1;
    }
  }
  finalize(d, counts, d.labels.size(), mols.size());
  return d;
}

CategoricalDistribution functional_group_distribution(
    std::span<const MoleculeGraph> mols, const std::vector<FunctionalGroupPattern>& library) {
  if (mols.empty()) throw Error("functional group distribution over an empty molecule set");
  CategoricalDistribution d;
  for (const auto& p : library) d.labels.push_back(p.id);
  std::vector<double> counts(d.labels.size(), 0);
  for (const auto& m : mols) {
    auto matches = match_functional_groups(m, library);
    for (size_t i = 0; i < d.labels.size(); ++i) counts[i] += matches[d.labels[i]];
  }
  finalize(d, counts, d.labels.size(), mols.size());
  return d;
}

double jsd_vectors(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error("jsd over vectors of different length");
  if (p.empty()) throw Error("jsd over empty vectors");
  double div = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0) div += 0.5 * p[i] * std::log(p[i] / m);
    if (q[i] > 0) div += 0.5 * q[i] * std::log(q[i] / m);
  }
  if (div < 0) div = 0;  // numerical guard
  return std::sqrt(div);
}

double jsd(const CategoricalDistribution& p, const CategoricalDistribution& q) {
  if (p.labels != q.labels) throw Error("jsd over distributions with different labels");
  if (p.empty || q.empty) throw Error("jsd over an empty distribution");
  return jsd_vectors(p.probabilities, q.probabilities);
}

double mae_frequency(const CategoricalDistribution& gen, const CategoricalDistribution& ref) {
  if (gen.labels != ref.labels) throw Error("mae over distributions with different labels");
  if (gen.labels.empty()) throw Error("mae over empty distributions");
  double sum = 0;
  for (size_t i = 0; i < gen.labels.size(); ++i) {
    sum += std::abs(gen.mean_frequency[i] - ref.mean_frequency[i]);
  }
  return sum / double(gen.labels.size());
}

}  // namespace pocketeval
