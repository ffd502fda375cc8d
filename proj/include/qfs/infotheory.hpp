#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "qfs/dataset.hpp"

namespace qfs {

// Empirical joint distribution over a column tuple. Tuples are stride-encoded
// into a single key (alphabets are small); only observed tuples are stored.
struct JointDistribution {
  std::unordered_map<std::uint64_t, std::int64_t> counts;
  std::int64_t total = 0;
  int arity = 0;

  static JointDistribution from_columns(const FeatureMatrix& m, std::span<const int> columns);
  double entropy_bits() const;
};

// All quantities are in bits (base-2 logarithms), plug-in estimates from the
// empirical counts. The label is addressable as column index num_features.
double entropy(const FeatureMatrix& m, std::span<const int> columns);
double conditional_entropy(const FeatureMatrix& m, std::span<const int> columns, std::span<const int> given);
double mutual_information(const FeatureMatrix& m, std::span<const int> a, std::span<const int> b);
double conditional_mutual_information(const FeatureMatrix& m, std::span<const int> a, std::span<const int> b,
                                      std::span<const int> given);
// Signed multivariate generalization; negative values indicate synergy.
double interaction_information(const FeatureMatrix& m, std::span<const int> columns);

}  // namespace qfs
