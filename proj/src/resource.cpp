#include "qfs/resource.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "qfs/classical.hpp"
#include "qfs/optimizer.hpp"
#include "qfs/pcbo.hpp"
#include "qfs/rng.hpp"

namespace qfs {

void RuntimeModelParams::validate() const {
  if (!(gate_time > 0.0) || !(per_shot_overhead > 0.0) || !(optimizer_baseline > 0.0))
    throw std::invalid_argument("model times must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("epsilon and delta must be in (0, 1)");
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
}

long shots_required(int n, double epsilon, double delta) {
  if (n < 1) throw std::invalid_argument("size must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("epsilon and delta must be in (0, 1)");
  const double bound = std::log(2.0 * std::pow(static_cast<double>(n), 3) / delta) / (2.0 * epsilon * epsilon);
  return static_cast<long>(std::ceil(bound));
}

double time_per_shot(int n, const RuntimeModelParams& params) {
  params.validate();
  return params.depth * std::pow(static_cast<double>(n), 3) * params.gate_time + params.per_shot_overhead;
}

double single_round_time(int n, const RuntimeModelParams& params) {
  return static_cast<double>(shots_required(n, params.epsilon, params.delta)) * time_per_shot(n, params) +
         params.optimizer_baseline;
}

double rqaoa_total_time(int n, int n_cutoff, const RuntimeModelParams& params) {
  if (n_cutoff >= n) throw std::invalid_argument("cutoff must be below the starting size");
  double total = 0.0;
  for (int i = 0; i < n - n_cutoff; ++i) total += single_round_time(n - i, params);
  return total;
}

double rqaoa_asymptotic_scale(int n, const RuntimeModelParams& params) {
  return params.depth * std::pow(static_cast<double>(n), 4) * params.gate_time /
         (params.epsilon * params.epsilon);
}

double ExponentialFit::operator()(double x) const { return a * std::exp(b * x) + c; }

namespace {

struct LogFitResult {
  double a = 0.0;
  double b = 0.0;
  double sse = std::numeric_limits<double>::infinity();
};

// For fixed c, regress log(y - c) on x.
LogFitResult log_domain_fit(std::span<const double> xs, std::span<const double> ys, double c) {
  LogFitResult res;
  const std::size_t n = xs.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double shifted = ys[i] - c;
    if (!(shifted > 0.0)) return res;
    const double ly = std::log(shifted);
    sx += xs[i];
    sy += ly;
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return res;
  res.b = (n * sxy - sx * sy) / denom;
  res.a = std::exp((sy - res.b * sx) / n);
  res.sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (res.a * std::exp(res.b * xs[i]) + c);
    res.sse += r * r;
  }
  return res;
}

double sse_of(std::span<const double> xs, std::span<const double> ys, double a, double b, double c) {
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (a * std::exp(b * xs[i]) + c);
    sse += r * r;
  }
  return sse;
}

}  // namespace

ExponentialFit fit_exponential(std::span<const double> sizes, std::span<const double> runtimes) {
  if (sizes.size() != runtimes.size()) throw std::invalid_argument("size/runtime length mismatch");
  if (sizes.size() < 3) throw std::invalid_argument("need at least 3 points");
  // Point order must not matter: sort by x up front.
  std::vector<std::size_t> order(sizes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (sizes[i] != sizes[j]) return sizes[i] < sizes[j];
    return runtimes[i] < runtimes[j];
  });
  std::vector<double> xs, ys;
  for (std::size_t i : order) {
    xs.push_back(sizes[i]);
    ys.push_back(runtimes[i]);
  }
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] == xs[i - 1]) throw std::invalid_argument("sizes must be distinct");

  ExponentialFit fit;
  fit.domain_min = xs.front();
  fit.domain_max = xs.back();

  const double y_min = *std::min_element(ys.begin(), ys.end());
  const double y_max = *std::max_element(ys.begin(), ys.end());
  if (y_max - y_min <= 1e-15 * std::max(1.0, std::abs(y_max))) {
    fit.degenerate = true;
    fit.b = 0.0;
    fit.a = 0.0;
    double mean = 0.0;
    for (double y : ys) mean += y;
    fit.c = mean / ys.size();
    fit.rms_residual = std::sqrt(sse_of(xs, ys, fit.a, fit.b, fit.c) / xs.size());
    return fit;
  }

  // Comb over the admissible offset range, then golden-section polish.
  const double span = y_max - y_min;
  const double c_hi = y_min - 1e-12 * std::max(1.0, span);
  const double c_lo = y_min - 10.0 * span;
  double best_c = c_lo;
  LogFitResult best{0.0, 0.0, std::numeric_limits<double>::infinity()};
  constexpr int kComb = 256;
  for (int i = 0; i <= kComb; ++i) {
    const double c = c_lo + (c_hi - c_lo) * i / kComb;
    const LogFitResult r = log_domain_fit(xs, ys, c);
    if (r.sse < best.sse) {
      best = r;
      best_c = c;
    }
  }
  {
    const double step = (c_hi - c_lo) / kComb;
    double lo = std::max(c_lo, best_c - step), hi = std::min(c_hi, best_c + step);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    LogFitResult f1 = log_domain_fit(xs, ys, x1), f2 = log_domain_fit(xs, ys, x2);
    for (int it = 0; it < 200; ++it) {
      if (f1.sse < f2.sse) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = log_domain_fit(xs, ys, x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = log_domain_fit(xs, ys, x2);
      }
    }
    const LogFitResult r = f1.sse < f2.sse ? f1 : f2;
    if (r.sse < best.sse) {
      best = r;
      best_c = f1.sse < f2.sse ? x1 : x2;
    }
  }

  // Local refinement of all three parameters in the linear domain.
  OptimizerConfig cfg;
  cfg.max_evals = 4000;
  cfg.ftol = 0.0;
  cfg.restarts = 1;
  cfg.initial_step = 1e-3;
  const double a0 = best.a, b0 = best.b, c0 = best_c;
  auto objective = [&](std::span<const double> p) {
    return sse_of(xs, ys, a0 * (1.0 + p[0]), b0 + p[1], c0 + p[2] * std::max(1.0, span));
  };
  const OptimizerResult res = nelder_mead(objective, 3, cfg);
  const double a = a0 * (1.0 + res.best_params[0]);
  const double b = b0 + res.best_params[1];
  const double c = c0 + res.best_params[2] * std::max(1.0, span);
  if (res.best_value <= best.sse) {
    fit.a = a;
    fit.b = b;
    fit.c = c;
    fit.rms_residual = std::sqrt(res.best_value / xs.size());
  } else {
    fit.a = best.a;
    fit.b = best.b;
    fit.c = best_c;
    fit.rms_residual = std::sqrt(best.sse / xs.size());
  }
  return fit;
}

double hybrid_speedup_ratio(int n, int n_cutoff, const ExponentialFit& fit, const RuntimeModelParams& params) {
  if (n_cutoff > n) throw std::invalid_argument("cutoff cannot exceed the starting size");
  const double classical = fit.a * std::exp(fit.b * n) + fit.c;
  const double quantum = n_cutoff < n ? rqaoa_total_time(n, n_cutoff, params) : 0.0;
  const double reduced_classical = fit.a * std::exp(fit.b * n_cutoff) + fit.c;
  if (!(classical > 0.0)) return std::numeric_limits<double>::infinity();
  return (quantum + reduced_classical) / classical;
}

std::optional<int> crossover_size(const ExponentialFit& fit, const RuntimeModelParams& params,
                                  int reduction_rounds, int n_min, int n_max) {
  if (reduction_rounds < 1) throw std::invalid_argument("need at least one reduction round");
  if (fit.degenerate || fit.b <= 0.0) return std::nullopt;
  for (int n = std::max(n_min, reduction_rounds + 2); n <= n_max; ++n) {
    if (hybrid_speedup_ratio(n, n - reduction_rounds, fit, params) < 1.0) return n;
  }
  return std::nullopt;
}

namespace {

// Instance family used for scaling runs: dense nonpositive coefficients with
// the same per-order normalizations as the label-information builder, plus
// the usual selection penalty at n = N/2.
SpinHamiltonian random_scaling_instance(int n, std::uint64_t seed, double lambda_c) {
  Rng rng(seed);
  const int k = std::max(1, n / 2);
  auto binom = [](int a, int b) {
    double r = 1.0;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  PolyBinaryProblem p;
  p.num_vars = n;
  p.cardinality = k;
  const double n3 = binom(k, 3) > 0 ? binom(k, 3) : 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int l = j + 1; l < n; ++l) p.add_term({i, j, l}, -rng.next_double() / n3);
  p.canonicalize();
  return to_spin(apply_cardinality_penalty(p, lambda_c));
}

SpinHamiltonian planted_scaling_instance(int n, std::uint64_t seed, double lambda_c) {
  const int k = std::max(3, n / 2);
  auto [matrix, planted] = synthesize_planted(200, n, std::max(1, n / 8), 4, 3, 0.1, seed);
  PolyBinaryProblem p = build_entropy_cubo(matrix, AlphaWeights{0.0, 0.0, 1.0}, std::min(k, n));
  return to_spin(apply_cardinality_penalty(p, lambda_c));
}

}  // namespace

std::vector<HarnessRow> scaling_harness(const HarnessConfig& config) {
  if (config.sizes.empty()) throw std::invalid_argument("no sizes requested");
  if (config.seeds_per_size < 1) throw std::invalid_argument("need at least one seed per size");
  std::vector<HarnessRow> rows;
  for (int size : config.sizes) {
    for (int s = 0; s < config.seeds_per_size; ++s) {
      const std::uint64_t instance_seed = derive_seed(config.seed, static_cast<std::uint64_t>(size) * 1000 + s);
      const SpinHamiltonian h = config.generator == "planted"
                                    ? planted_scaling_instance(size, instance_seed, config.lambda_c)
                                    : random_scaling_instance(size, instance_seed, config.lambda_c);

      double best_known = std::numeric_limits<double>::infinity();
      std::vector<HarnessRow> instance_rows;
      for (const std::string& solver : config.solvers) {
        HarnessRow row;
        row.size = size;
        row.seed = instance_seed;
        row.solver = solver;
        const auto start = std::chrono::steady_clock::now();
        std::vector<int> solution;
        if (solver == "brute") {
          if (size > config.brute_cap) continue;
          SpinSolution sol = brute_force(h, config.brute_cap);
          solution = std::move(sol.spins);
        } else if (solver == "tabu") {
          TabuConfig tc;
          tc.seed = derive_seed(instance_seed, 7);
          tc.improvement_timeout_seconds = config.improvement_timeout_seconds;
          tc.improvement_timeout_iters = config.improvement_timeout_iters;
          TabuResult sol = tabu_search(h, tc);
          solution = std::move(sol.spins);
          row.timeout_hit = sol.timeout_hit;
        } else {
          throw std::invalid_argument("unknown harness solver: " + solver);
        }
        row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        // One canonical evaluation path, so identical assignments produce
        // identical energies and the exhaustive gap is exactly zero.
        row.energy = evaluate_spin(h, solution);
        best_known = std::min(best_known, row.energy);
        instance_rows.push_back(std::move(row));
      }
      for (HarnessRow& row : instance_rows) {
        if (std::abs(best_known) > 0.0) {
          row.gap = std::abs(row.energy - best_known) / std::abs(best_known);
        } else {
          row.gap = std::abs(row.energy - best_known);
          row.gap_is_absolute = true;
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void write_harness_csv(std::ostream& out, const std::vector<HarnessRow>& rows, bool record_time) {
  out << "size,seed,solver,time_seconds,energy,gap,gap_is_absolute,timeout_hit\n";
  char buf[64];
  for (const HarnessRow& row : rows) {
    out << row.size << "," << row.seed << "," << row.solver << ",";
    if (record_time) {
      std::snprintf(buf, sizeof(buf), "%.6f", row.wall_seconds);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", row.energy);
    out << "," << buf;
    std::snprintf(buf, sizeof(buf), "%.17g", row.gap);
    out << "," << buf << "," << (row.gap_is_absolute ? 1 : 0) << "," << (row.timeout_hit ? 1 : 0) << "\n";
  }
}

}  // namespace qfs
