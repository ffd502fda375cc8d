#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qfs {

// Budget is counted in objective evaluations and is shared across restarts.
// ftol = 0 disables early stopping, so the full budget is always spent.
struct OptimizerConfig {
  int max_evals = 5000;
  double ftol = 0.0;
  int restarts = 4;
  double initial_step = 0.25;
  std::uint64_t seed = 0;
};

struct OptimizerResult {
  std::vector<double> best_params;
  double best_value = 0.0;
  int evaluations = 0;
};

// Nelder-Mead simplex search. Best-so-far value is monotone non-increasing
// and the whole run is deterministic for a fixed seed.
OptimizerResult nelder_mead(const std::function<double(std::span<const double>)>& objective, int dim,
                            const OptimizerConfig& config);

}  // namespace qfs
