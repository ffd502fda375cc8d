#pragma once

#include <string>
#include <vector>

#include "qfs/dataset.hpp"
#include "qfs/pcbo.hpp"
#include "qfs/rng.hpp"

namespace qfs::testing {

// Column-wise matrix construction for hand-built distributions.
inline FeatureMatrix make_matrix(const std::vector<std::vector<int>>& columns, const std::vector<int>& labels) {
  FeatureMatrix m;
  m.num_features = static_cast<int>(columns.size());
  m.num_rows = static_cast<int>(labels.size());
  m.values.resize(static_cast<std::size_t>(m.num_rows) * m.num_features);
  m.alphabets.assign(m.num_features, 1);
  for (int c = 0; c < m.num_features; ++c) {
    for (int r = 0; r < m.num_rows; ++r) {
      m.values[static_cast<std::size_t>(r) * m.num_features + c] = columns[c][r];
      m.alphabets[c] = std::max(m.alphabets[c], columns[c][r] + 1);
    }
    m.feature_names.push_back("f" + std::to_string(c));
  }
  m.labels = labels;
  m.label_alphabet = 1;
  for (int l : labels) m.label_alphabet = std::max(m.label_alphabet, l + 1);
  m.validate();
  return m;
}

inline std::vector<int> col(std::initializer_list<int> v) { return std::vector<int>(v); }

// Random polynomial with terms of order 1..3, coefficients in [-1, 1].
inline PolyBinaryProblem random_problem(int num_vars, std::uint64_t seed, double density = 0.7) {
  Rng rng(seed);
  PolyBinaryProblem p;
  p.num_vars = num_vars;
  p.constant = rng.uniform(-1.0, 1.0);
  for (int i = 0; i < num_vars; ++i) {
    if (rng.next_double() < density) p.add_term({i}, rng.uniform(-1.0, 1.0));
    for (int j = i + 1; j < num_vars; ++j) {
      if (rng.next_double() < density) p.add_term({i, j}, rng.uniform(-1.0, 1.0));
      for (int k = j + 1; k < num_vars; ++k)
        if (rng.next_double() < density) p.add_term({i, j, k}, rng.uniform(-1.0, 1.0));
    }
  }
  p.canonicalize();
  return p;
}

inline SpinHamiltonian random_hamiltonian(int num_vars, std::uint64_t seed, double density = 0.7) {
  PolyBinaryProblem p = random_problem(num_vars, seed, density);
  return to_spin(p);
}

// Dense third-order spin instance with uniform random coefficients.
inline SpinHamiltonian dense_cubic_instance(int num_vars, std::uint64_t seed) {
  Rng rng(seed);
  SpinHamiltonian h;
  h.num_vars = num_vars;
  for (int i = 0; i < num_vars; ++i)
    for (int j = i + 1; j < num_vars; ++j)
      for (int k = j + 1; k < num_vars; ++k) h.add_term({i, j, k}, rng.uniform(-1.0, 1.0));
  return h;
}

}  // namespace qfs::testing
