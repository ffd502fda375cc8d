#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qfs {

struct RuntimeModelParams {
  double gate_time = 1e-6;          // seconds per dominating gate
  double per_shot_overhead = 1e-3;  // seconds of initialization etc. per shot
  double optimizer_baseline = 1.0;  // constant classical cost per round
  double epsilon = 0.1;             // simultaneous estimation tolerance
  double delta = 0.05;              // allowed failure rate
  int depth = 1;

  void validate() const;
};

// Shots so that all up-to-third-order parities are within epsilon at once:
// ceil( ln(2 N^3 / delta) / (2 epsilon^2) ).
long shots_required(int n, double epsilon, double delta);

// p * N^3 * t_gate + t_overhead.
double time_per_shot(int n, const RuntimeModelParams& params);

// shots * time-per-shot + optimizer baseline.
double single_round_time(int n, const RuntimeModelParams& params);

// Exact sum of single-round times over sizes N, N-1, ..., N_c + 1.
double rqaoa_total_time(int n, int n_cutoff, const RuntimeModelParams& params);

// Asymptotic comparison scale p N^4 t_g / eps^2 for the same reduction.
double rqaoa_asymptotic_scale(int n, const RuntimeModelParams& params);

struct ExponentialFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double rms_residual = 0.0;
  double domain_min = 0.0;
  double domain_max = 0.0;
  bool degenerate = false;

  double operator()(double x) const;
};

// Least-squares fit of a*e^(b*x) + c: comb + golden-section search over c
// with closed-form log-domain regression, then simplex refinement.
ExponentialFit fit_exponential(std::span<const double> sizes, std::span<const double> runtimes);

// (reduction time + a e^{b N_c} + c) / (a e^{b N} + c).
double hybrid_speedup_ratio(int n, int n_cutoff, const ExponentialFit& fit, const RuntimeModelParams& params);

// Smallest N in [n_min, n_max] whose hybrid/classical ratio drops below 1.
std::optional<int> crossover_size(const ExponentialFit& fit, const RuntimeModelParams& params,
                                  int reduction_rounds, int n_min = 4, int n_max = 1000);

struct HarnessConfig {
  std::vector<int> sizes;
  int seeds_per_size = 1;
  std::vector<std::string> solvers{"brute", "tabu"};  // subset of {brute, tabu}
  double improvement_timeout_seconds = 10.0;
  long improvement_timeout_iters = 0;  // nonzero switches tabu to the reproducible cutoff
  std::string generator = "random";    // "random" or "planted"
  std::uint64_t seed = 0;
  int brute_cap = 24;
  double lambda_c = 5.0;
  bool record_time = true;
};

struct HarnessRow {
  int size = 0;
  std::uint64_t seed = 0;
  std::string solver;
  double wall_seconds = 0.0;
  double energy = 0.0;
  double gap = 0.0;
  bool gap_is_absolute = false;  // set when the best-known energy is zero
  bool timeout_hit = false;
};

std::vector<HarnessRow> scaling_harness(const HarnessConfig& config);

void write_harness_csv(std::ostream& out, const std::vector<HarnessRow>& rows, bool record_time);

}  // namespace qfs
