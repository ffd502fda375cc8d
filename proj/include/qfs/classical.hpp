#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qfs/hrqaoa.hpp"
#include "qfs/pcbo.hpp"

namespace qfs {

struct SpinSolution {
  std::vector<int> spins;
  double energy = 0.0;
};

// Exhaustive minimum over all 2^N spin assignments. Ties resolve to the
// lexicographically smallest spin vector with +1 ordered before -1.
SpinSolution brute_force(const SpinHamiltonian& h, int cap = kDefaultQubitCap);

// Exhaustive minimum over the size-n selections of a constrained problem;
// feasible whenever C(num_vars, n) stays within max_subsets.
struct BinarySolution {
  std::vector<int> bits;
  double energy = 0.0;
};
BinarySolution brute_force_cardinality(const PolyBinaryProblem& p, std::uint64_t max_subsets = 100000000ULL);

struct TabuConfig {
  long iterations = -1;  // -1: 500 * num_vars
  int tenure = -1;       // -1: ceil(num_vars / 4)
  int restarts = 20;
  std::uint64_t seed = 0;
  // Stop a restart when the incumbent has not improved for this long.
  // Seconds use the wall clock; iterations keep runs reproducible.
  double improvement_timeout_seconds = 0.0;
  long improvement_timeout_iters = 0;
};

struct TabuResult {
  std::vector<int> spins;
  double energy = 0.0;
  bool timeout_hit = false;
  long iterations_used = 0;
};

// Single-flip tabu search with aspiration: a tabu move is accepted when it
// improves the incumbent. Deterministic per seed when the wall-clock
// timeout is disabled.
TabuResult tabu_search(const SpinHamiltonian& h, const TabuConfig& config);

// Baseline reducer: each round fixes a uniformly random term with a random
// sign and eliminated index, through the same substitution machinery.
ReductionTrace random_edge_fix(const SpinHamiltonian& h, int cutoff, std::uint64_t seed);

// Rewrites cubic products through ancilla variables a = x_i x_j enforced by
// penalty * (x_i x_j - 2 a x_i - 2 a x_j + 3 a); pairs are chosen by a
// greedy most-frequent-pair cover. Output is quadratic.
struct OrderReduction {
  PolyBinaryProblem problem;
  int original_num_vars = 0;
  std::vector<std::pair<int, std::pair<int, int>>> ancillas;  // ancilla -> (i, j)
};
OrderReduction reduce_order(const PolyBinaryProblem& p, double penalty);

}  // namespace qfs
