#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qfs/optimizer.hpp"
#include "qfs/pcbo.hpp"
#include "qfs/simulator.hpp"

namespace qfs {

struct DonorResult {
  std::vector<int> variable_subset;  // sorted original indices, size donor_size
  QaoaParams params;
  double trained_energy = 0.0;
  int optimizer_iterations = 0;
};

// One variable-elimination step: Z_eliminated = sign * prod of the other
// term members. Indices are in the variable space current at that round.
struct EdgeFix {
  TermKey term;
  int eliminated = -1;
  int sign = +1;
  int round = 0;
};

struct EvalCounters {
  long target_energy_evals = 0;   // full-size <H> evaluations
  long donor_energy_evals = 0;    // donor-size <H> evaluations
  long target_state_preps = 0;    // full-size circuit executions
  long optimizer_iterations = 0;  // objective evaluations spent in training
};

struct RoundRecord {
  int round = 0;
  TermKey fixed_term_original;  // fixed term mapped back to input indices
  int eliminated_original = -1;
  int sign = +1;
  std::vector<double> donor_energies;
  std::vector<double> transferred_energies;
  int selected_donor = -1;
  long target_energy_evals = 0;
  long optimizer_iterations = 0;
};

struct ReductionTrace {
  int original_num_vars = 0;
  std::vector<EdgeFix> fixes;
  // variable_maps[r][j] = index in the round-r space of variable j in the
  // round-(r+1) space; used to walk reduced solutions back to the input.
  std::vector<std::vector<int>> variable_maps;
  SpinHamiltonian final_problem;
  EvalCounters counters;
  std::vector<RoundRecord> rounds;
  bool stopped_early = false;
};

struct HrqaoaConfig {
  int donor_size = 10;
  int donor_count = 3;
  int depth = 1;
  int rounds = 0;                 // edge fixes to apply
  std::optional<int> cutoff;      // alternative stop: remaining variable count
  OptimizerConfig optimizer;      // shared by donor training and direct optimization
  std::uint64_t seed = 0;
  bool deterministic_elimination = false;  // pick smallest index instead of random
  bool reuse_donors = false;               // keep round-0 donor parameter pool
  int donor_retry_cap = 20;
  int max_qubits = kDefaultQubitCap;
  int threads = 1;

  void validate(int num_vars, bool requires_donors) const;
};

std::pair<SpinHamiltonian, std::vector<int>> subsample_donor(const SpinHamiltonian& h, int donor_size,
                                                             std::uint64_t seed);

DonorResult train_donor(const SpinHamiltonian& donor, int depth, const OptimizerConfig& config,
                        std::uint64_t seed, int max_qubits = kDefaultQubitCap);

// Evaluates every donor's parameters on the target (donor_count full-size
// <H> evaluations) and returns the argmin; ties go to the lowest donor index.
// best_state receives the prepared state of the winning parameters.
std::pair<QaoaParams, std::vector<double>> select_donor_params(const SpinHamiltonian& target,
                                                               const std::vector<DonorResult>& donors,
                                                               EvalCounters& counters, StateVector* best_state,
                                                               int max_qubits = kDefaultQubitCap);

// Substitution machinery shared by correlation-driven and random edge fixing.
// Returns the reduced operator and the map from new to old variable indices.
std::pair<SpinHamiltonian, std::vector<int>> apply_edge_fix(const SpinHamiltonian& h, const TermKey& term,
                                                            int sign, int eliminated);

// Picks the entry with the largest |expectation| (ties: lexicographically
// smallest tuple) and eliminates one of its members.
std::pair<SpinHamiltonian, EdgeFix> fix_edge(const SpinHamiltonian& h, const CorrelationDictionary& corr,
                                             std::uint64_t elimination_seed, bool deterministic_elimination,
                                             std::vector<int>* variable_map = nullptr);

ReductionTrace run_hrqaoa(const SpinHamiltonian& h, const HrqaoaConfig& config);
ReductionTrace run_rqaoa(const SpinHamiltonian& h, const HrqaoaConfig& config);

std::vector<int> reconstruct_solution(const ReductionTrace& trace, std::span<const int> reduced_solution);

// Maps an index in the space after `round` fixes back to the input space.
int map_to_original(const ReductionTrace& trace, int round, int index);

void write_trace_report(std::ostream& out, const ReductionTrace& trace, const std::string& method);

}  // namespace qfs
