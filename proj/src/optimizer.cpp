#include "qfs/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qfs/rng.hpp"

namespace qfs {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;
constexpr double kPi = 3.14159265358979323846;

struct Tracker {
  const std::function<double(std::span<const double>)>* objective;
  int limit;
  int evals = 0;
  std::vector<double> best_params;
  double best_value = std::numeric_limits<double>::infinity();

  bool exhausted() const { return evals >= limit; }

  double eval(const std::vector<double>& x) {
    ++evals;
    const double v = (*objective)(x);
    if (v < best_value) {
      best_value = v;
      best_params = x;
    }
    return v;
  }
};

void run_simplex(Tracker& tracker, std::vector<double> start, double step, double ftol) {
  const int dim = static_cast<int>(start.size());
  std::vector<std::vector<double>> pts(dim + 1, start);
  std::vector<double> vals(dim + 1);
  for (int i = 1; i <= dim; ++i) pts[i][i - 1] += step;
  for (int i = 0; i <= dim && !tracker.exhausted(); ++i) vals[i] = tracker.eval(pts[i]);

  std::vector<int> order(dim + 1);
  while (!tracker.exhausted()) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    const int lo = order[0], hi = order[dim], next_hi = order[dim - 1];
    if (ftol > 0.0 && std::abs(vals[hi] - vals[lo]) <= ftol) return;

    std::vector<double> centroid(dim, 0.0);
    for (int i = 0; i <= dim; ++i) {
      if (i == hi) continue;
      for (int d = 0; d < dim; ++d) centroid[d] += pts[i][d];
    }
    for (int d = 0; d < dim; ++d) centroid[d] /= dim;

    auto blend = [&](double t) {
      std::vector<double> x(dim);
      for (int d = 0; d < dim; ++d) x[d] = centroid[d] + t * (pts[hi][d] - centroid[d]);
      return x;
    };

    const std::vector<double> reflected = blend(-kReflect);
    const double fr = tracker.eval(reflected);
    if (fr < vals[lo]) {
      if (tracker.exhausted()) return;
      const std::vector<double> expanded = blend(-kExpand);
      const double fe = tracker.eval(expanded);
      if (fe < fr) {
        pts[hi] = expanded;
        vals[hi] = fe;
      } else {
        pts[hi] = reflected;
        vals[hi] = fr;
      }
    } else if (fr < vals[next_hi]) {
      pts[hi] = reflected;
      vals[hi] = fr;
    } else {
      if (tracker.exhausted()) return;
      const std::vector<double> contracted = blend(kContract);
      const double fc = tracker.eval(contracted);
      if (fc < vals[hi]) {
        pts[hi] = contracted;
        vals[hi] = fc;
      } else {
        for (int i = 0; i <= dim; ++i) {
          if (i == lo) continue;
          for (int d = 0; d < dim; ++d) pts[i][d] = pts[lo][d] + kShrink * (pts[i][d] - pts[lo][d]);
          if (tracker.exhausted()) return;
          vals[i] = tracker.eval(pts[i]);
        }
      }
    }
  }
}

}  // namespace

OptimizerResult nelder_mead(const std::function<double(std::span<const double>)>& objective, int dim,
                            const OptimizerConfig& config) {
  if (dim < 1) throw std::invalid_argument("optimizer dimension must be positive");
  if (config.max_evals < 1) throw std::invalid_argument("evaluation budget must be positive");
  if (config.restarts < 1) throw std::invalid_argument("need at least one start");

  Tracker tracker{&objective, config.max_evals, 0, {}, std::numeric_limits<double>::infinity()};
  Rng rng(config.seed);
  for (int r = 0; r < config.restarts; ++r) {
    // The evaluation budget is divided across restarts so every start runs
    // even when ftol never triggers.
    tracker.limit = static_cast<int>((static_cast<long>(r + 1) * config.max_evals) / config.restarts);
    if (tracker.exhausted()) continue;
    std::vector<double> start(dim);
    if (r == 0) {
      // Fixed small-angle start; later restarts are seeded random.
      for (int d = 0; d < dim; ++d) start[d] = (d % 2 == 0 ? 0.01 : -0.02) * (1 + d / 2);
    } else {
      for (int d = 0; d < dim; ++d) start[d] = rng.uniform(-kPi / 2.0, kPi / 2.0);
    }
    run_simplex(tracker, std::move(start), config.initial_step, config.ftol);
  }
  return {std::move(tracker.best_params), tracker.best_value, tracker.evals};
}

}  // namespace qfs
