#include "qfs/hrqaoa.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <stdexcept>

#include "qfs/rng.hpp"

namespace qfs {

namespace {

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join_key(const TermKey& key) {
  std::string s;
  for (std::size_t i = 0; i < key.size(); ++i) s += (i ? "," : "") + std::to_string(key[i]);
  return s;
}

}  // namespace

void HrqaoaConfig::validate(int num_vars, bool requires_donors) const {
  if (requires_donors) {
    if (donor_size < 1 || donor_size >= num_vars)
      throw std::invalid_argument("donor size must be in [1, num_vars)");
    if (donor_count < 1) throw std::invalid_argument("need at least one donor");
  }
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  if (rounds < 0 || rounds >= num_vars) throw std::invalid_argument("round count must be in [0, num_vars)");
  if (cutoff && (*cutoff < 1 || *cutoff >= num_vars))
    throw std::invalid_argument("cutoff must be in [1, num_vars)");
}

std::pair<SpinHamiltonian, std::vector<int>> subsample_donor(const SpinHamiltonian& h, int donor_size,
                                                             std::uint64_t seed) {
  if (donor_size >= h.num_vars) throw std::invalid_argument("donor must be strictly smaller than the target");
  if (donor_size < 1) throw std::invalid_argument("donor size must be positive");
  Rng rng(seed);
  std::vector<int> subset = rng.sample_subset(h.num_vars, donor_size);
  std::vector<int> position(h.num_vars, -1);
  for (std::size_t i = 0; i < subset.size(); ++i) position[subset[i]] = static_cast<int>(i);

  SpinHamiltonian donor;
  donor.num_vars = donor_size;
  donor.offset = h.offset;
  for (const auto& [key, coeff] : h.terms) {
    TermKey reindexed;
    reindexed.reserve(key.size());
    bool inside = true;
    for (int i : key) {
      if (position[i] < 0) {
        inside = false;
        break;
      }
      reindexed.push_back(position[i]);
    }
    if (inside) donor.add_term(std::move(reindexed), coeff);
  }
  return {std::move(donor), std::move(subset)};
}

DonorResult train_donor(const SpinHamiltonian& donor, int depth, const OptimizerConfig& config,
                        std::uint64_t seed, int max_qubits) {
  const std::vector<double> table = build_energy_table(donor, max_qubits);
  const int num_qubits = donor.num_vars;
  auto objective = [&](std::span<const double> theta) {
    QaoaParams params;
    params.gammas.assign(theta.begin(), theta.begin() + depth);
    params.betas.assign(theta.begin() + depth, theta.end());
    const StateVector state = run_qaoa_with_table(table, num_qubits, params);
    return energy_expectation(state, table);
  };
  OptimizerConfig cfg = config;
  cfg.seed = seed;
  const OptimizerResult res = nelder_mead(objective, 2 * depth, cfg);

  DonorResult out;
  out.params.gammas.assign(res.best_params.begin(), res.best_params.begin() + depth);
  out.params.betas.assign(res.best_params.begin() + depth, res.best_params.end());
  out.trained_energy = res.best_value;
  out.optimizer_iterations = res.evaluations;
  return out;
}

std::pair<QaoaParams, std::vector<double>> select_donor_params(const SpinHamiltonian& target,
                                                               const std::vector<DonorResult>& donors,
                                                               EvalCounters& counters, StateVector* best_state,
                                                               int max_qubits) {
  if (donors.empty()) throw std::invalid_argument("donor list must be nonempty");
  const std::vector<double> table = build_energy_table(target, max_qubits);
  std::vector<double> transferred(donors.size());
  int best = -1;
  StateVector winning;
  for (std::size_t i = 0; i < donors.size(); ++i) {
    StateVector state = run_qaoa_with_table(table, target.num_vars, donors[i].params);
    transferred[i] = energy_expectation(state, table);
    ++counters.target_energy_evals;
    ++counters.target_state_preps;
    if (best < 0 || transferred[i] < transferred[best]) {
      best = static_cast<int>(i);
      winning = std::move(state);
    }
  }
  if (best_state) *best_state = std::move(winning);
  return {donors[best].params, std::move(transferred)};
}

std::pair<SpinHamiltonian, std::vector<int>> apply_edge_fix(const SpinHamiltonian& h, const TermKey& term,
                                                            int sign, int eliminated) {
  if (h.num_vars < 2) throw std::invalid_argument("cannot fix an edge on fewer than 2 variables");
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  if (std::find(term.begin(), term.end(), eliminated) == term.end())
    throw std::invalid_argument("eliminated index must belong to the fixed term");

  // Z_e = sign * prod of the partners; products reduce via Z^2 = I, so the
  // support of a rewritten term is a symmetric difference.
  TermKey partners;
  for (int i : term)
    if (i != eliminated) partners.push_back(i);

  SpinHamiltonian reduced;
  reduced.num_vars = h.num_vars - 1;
  reduced.offset = h.offset;
  std::vector<int> variable_map(reduced.num_vars);
  for (int j = 0; j < reduced.num_vars; ++j) variable_map[j] = j < eliminated ? j : j + 1;

  TermMap rewritten;
  for (const auto& [key, coeff] : h.terms) {
    const bool contains = std::binary_search(key.begin(), key.end(), eliminated);
    TermKey support;
    double c = coeff;
    if (contains) {
      TermKey without;
      without.reserve(key.size() - 1);
      for (int i : key)
        if (i != eliminated) without.push_back(i);
      support.resize(without.size() + partners.size());
      const auto end = std::set_symmetric_difference(without.begin(), without.end(), partners.begin(),
                                                     partners.end(), support.begin());
      support.resize(static_cast<std::size_t>(end - support.begin()));
      c *= sign;
    } else {
      support = key;
    }
    if (support.empty()) {
      reduced.offset += c;
      continue;
    }
    for (int& i : support) i = i < eliminated ? i : i - 1;
    auto it = rewritten.find(support);
    if (it == rewritten.end())
      rewritten.emplace(std::move(support), c);
    else
      it->second += c;
  }
  reduced.terms = std::move(rewritten);
  reduced.canonicalize();
  return {std::move(reduced), std::move(variable_map)};
}

std::pair<SpinHamiltonian, EdgeFix> fix_edge(const SpinHamiltonian& h, const CorrelationDictionary& corr,
                                             std::uint64_t elimination_seed, bool deterministic_elimination,
                                             std::vector<int>* variable_map) {
  if (corr.entries.empty()) throw std::invalid_argument("correlation dictionary is empty");
  if (h.num_vars < 2) throw std::invalid_argument("cannot fix an edge on fewer than 2 variables");

  // Map iteration is in tuple order, so on ties the lexicographically
  // smallest tuple wins via strict comparison.
  const TermKey* best_key = nullptr;
  double best_abs = -1.0;
  double best_value = 0.0;
  for (const auto& [key, value] : corr.entries) {
    if (std::abs(value) > best_abs) {
      best_abs = std::abs(value);
      best_value = value;
      best_key = &key;
    }
  }

  EdgeFix fix;
  fix.term = *best_key;
  fix.sign = best_value >= 0.0 ? +1 : -1;
  if (deterministic_elimination) {
    fix.eliminated = fix.term.front();
  } else {
    Rng rng(elimination_seed);
    fix.eliminated = fix.term[rng.next_below(fix.term.size())];
  }
  auto [reduced, map] = apply_edge_fix(h, fix.term, fix.sign, fix.eliminated);
  if (variable_map) *variable_map = std::move(map);
  return {std::move(reduced), std::move(fix)};
}

int map_to_original(const ReductionTrace& trace, int round, int index) {
  for (int r = round - 1; r >= 0; --r) index = trace.variable_maps[r][index];
  return index;
}

namespace {

enum class Mode { Hyper, Direct };

ReductionTrace run_recursive(const SpinHamiltonian& input, const HrqaoaConfig& config, Mode mode) {
  config.validate(input.num_vars, mode == Mode::Hyper);
  if (mode == Mode::Direct && input.num_vars > config.max_qubits)
    throw std::invalid_argument("problem exceeds the simulation cap");
  if (mode == Mode::Hyper && config.donor_size > config.max_qubits)
    throw std::invalid_argument("donor size exceeds the simulation cap");

  ReductionTrace trace;
  trace.original_num_vars = input.num_vars;
  SpinHamiltonian current = input;
  std::vector<DonorResult> donor_pool;

  std::uint64_t seq = config.seed;
  for (int round = 0; round < config.rounds; ++round) {
    if (config.cutoff && current.num_vars <= *config.cutoff) break;
    if (current.num_vars < 2 || current.terms.empty()) {
      trace.stopped_early = true;
      break;
    }

    RoundRecord record;
    record.round = round;
    const long target_evals_before = trace.counters.target_energy_evals;
    const long optimizer_before = trace.counters.optimizer_iterations;

    QaoaParams chosen;
    StateVector state;
    if (mode == Mode::Hyper) {
      std::vector<DonorResult> donors;
      if (config.reuse_donors && !donor_pool.empty()) {
        donors = donor_pool;
      } else {
        const int donor_size = std::min(config.donor_size, current.num_vars - 1);
        std::vector<SpinHamiltonian> drawn(config.donor_count);
        std::vector<std::vector<int>> subsets(config.donor_count);
        std::vector<std::uint64_t> train_seeds(config.donor_count);
        for (int d = 0; d < config.donor_count; ++d) {
          // Donors without internal terms carry no signal; resample.
          for (int attempt = 0; attempt <= config.donor_retry_cap; ++attempt) {
            std::tie(drawn[d], subsets[d]) =
                subsample_donor(current, donor_size, derive_seed(seq, 1000 + attempt));
            if (!drawn[d].terms.empty()) break;
          }
          seq = derive_seed(seq, 17);
          train_seeds[d] = derive_seed(seq, 23);
          seq = derive_seed(seq, 29);
        }
        if (std::any_of(drawn.begin(), drawn.end(),
                        [](const SpinHamiltonian& d) { return d.terms.empty(); })) {
          // No trainable donor exists at this size; stop and record.
          trace.stopped_early = true;
          break;
        }
        // Trainings are independent; results are merged in donor order so
        // the outcome does not depend on the thread count.
        donors.resize(config.donor_count);
        if (config.threads > 1 && config.donor_count > 1) {
          std::vector<std::future<DonorResult>> futures;
          for (int d = 0; d < config.donor_count; ++d)
            futures.push_back(std::async(std::launch::async, [&, d] {
              return train_donor(drawn[d], config.depth, config.optimizer, train_seeds[d], config.max_qubits);
            }));
          for (int d = 0; d < config.donor_count; ++d) donors[d] = futures[d].get();
        } else {
          for (int d = 0; d < config.donor_count; ++d)
            donors[d] = train_donor(drawn[d], config.depth, config.optimizer, train_seeds[d], config.max_qubits);
        }
        for (int d = 0; d < config.donor_count; ++d) {
          donors[d].variable_subset = subsets[d];
          trace.counters.donor_energy_evals += donors[d].optimizer_iterations;
          trace.counters.optimizer_iterations += donors[d].optimizer_iterations;
        }
        if (config.reuse_donors) donor_pool = donors;
      }
      for (const DonorResult& d : donors) record.donor_energies.push_back(d.trained_energy);
      auto [params, transferred] = select_donor_params(current, donors, trace.counters, &state, config.max_qubits);
      chosen = std::move(params);
      record.transferred_energies = transferred;
      record.selected_donor = static_cast<int>(std::min_element(transferred.begin(), transferred.end()) -
                                               transferred.begin());
    } else {
      // Full variational loop on the current (large) operator.
      const std::vector<double> table = build_energy_table(current, config.max_qubits);
      const int num_qubits = current.num_vars;
      const int depth = config.depth;
      long evals = 0;
      auto objective = [&](std::span<const double> theta) {
        QaoaParams params;
        params.gammas.assign(theta.begin(), theta.begin() + depth);
        params.betas.assign(theta.begin() + depth, theta.end());
        const StateVector st = run_qaoa_with_table(table, num_qubits, params);
        ++evals;
        return energy_expectation(st, table);
      };
      OptimizerConfig cfg = config.optimizer;
      cfg.seed = derive_seed(seq, 23);
      const OptimizerResult res = nelder_mead(objective, 2 * depth, cfg);
      trace.counters.target_energy_evals += evals;
      trace.counters.target_state_preps += evals;
      trace.counters.optimizer_iterations += res.evaluations;
      chosen.gammas.assign(res.best_params.begin(), res.best_params.begin() + depth);
      chosen.betas.assign(res.best_params.begin() + depth, res.best_params.end());
      state = run_qaoa_with_table(table, num_qubits, chosen);
      ++trace.counters.target_state_preps;
      seq = derive_seed(seq, 29);
    }

    const CorrelationDictionary corr = correlation_dictionary(state, current);
    std::vector<int> variable_map;
    auto [reduced, fix] = fix_edge(current, corr, derive_seed(seq, 31), config.deterministic_elimination,
                                   &variable_map);
    seq = derive_seed(seq, 37);
    fix.round = round;

    record.sign = fix.sign;
    record.fixed_term_original = fix.term;
    for (int& i : record.fixed_term_original) i = map_to_original(trace, round, i);
    record.eliminated_original = map_to_original(trace, round, fix.eliminated);
    record.target_energy_evals = trace.counters.target_energy_evals - target_evals_before;
    record.optimizer_iterations = trace.counters.optimizer_iterations - optimizer_before;

    trace.fixes.push_back(std::move(fix));
    trace.variable_maps.push_back(std::move(variable_map));
    trace.rounds.push_back(std::move(record));
    current = std::move(reduced);
  }
  trace.final_problem = std::move(current);
  return trace;
}

}  // namespace

ReductionTrace run_hrqaoa(const SpinHamiltonian& h, const HrqaoaConfig& config) {
  return run_recursive(h, config, Mode::Hyper);
}

ReductionTrace run_rqaoa(const SpinHamiltonian& h, const HrqaoaConfig& config) {
  return run_recursive(h, config, Mode::Direct);
}

std::vector<int> reconstruct_solution(const ReductionTrace& trace, std::span<const int> reduced_solution) {
  if (static_cast<int>(reduced_solution.size()) != trace.final_problem.num_vars)
    throw std::invalid_argument("reduced solution length does not match the final problem");
  for (int s : reduced_solution)
    if (s != 1 && s != -1) throw std::invalid_argument("spins must be +1 or -1");

  std::vector<int> spins(reduced_solution.begin(), reduced_solution.end());
  for (int r = static_cast<int>(trace.fixes.size()) - 1; r >= 0; --r) {
    const EdgeFix& fix = trace.fixes[r];
    const std::vector<int>& map = trace.variable_maps[r];
    std::vector<int> previous(map.size() + 1, 0);
    for (std::size_t j = 0; j < map.size(); ++j) previous[map[j]] = spins[j];
    int value = fix.sign;
    for (int i : fix.term)
      if (i != fix.eliminated) value *= previous[i];
    previous[fix.eliminated] = value;
    spins = std::move(previous);
  }
  if (static_cast<int>(spins.size()) != trace.original_num_vars)
    throw std::invalid_argument("trace is inconsistent with its original size");
  return spins;
}

void write_trace_report(std::ostream& out, const ReductionTrace& trace, const std::string& method) {
  out << "method " << method << "\n";
  out << "original_vars " << trace.original_num_vars << "\n";
  out << "rounds " << trace.fixes.size() << "\n";
  out << "stopped_early " << (trace.stopped_early ? 1 : 0) << "\n";
  for (std::size_t r = 0; r < trace.fixes.size(); ++r) {
    const EdgeFix& fix = trace.fixes[r];
    out << "round " << r << " term " << join_key(fix.term) << " sign " << (fix.sign > 0 ? "+1" : "-1")
        << " eliminated " << fix.eliminated;
    if (r < trace.rounds.size()) {
      const RoundRecord& rec = trace.rounds[r];
      out << " term_original " << join_key(rec.fixed_term_original) << " eliminated_original "
          << rec.eliminated_original;
      out << " donor_energies ";
      for (std::size_t i = 0; i < rec.donor_energies.size(); ++i)
        out << (i ? "," : "") << format_full(rec.donor_energies[i]);
      out << " transferred_energies ";
      for (std::size_t i = 0; i < rec.transferred_energies.size(); ++i)
        out << (i ? "," : "") << format_full(rec.transferred_energies[i]);
      out << " selected_donor " << rec.selected_donor << " target_energy_evals " << rec.target_energy_evals
          << " optimizer_iterations " << rec.optimizer_iterations;
    }
    out << "\n";
  }
  out << "counters target_energy_evals " << trace.counters.target_energy_evals << " donor_energy_evals "
      << trace.counters.donor_energy_evals << " target_state_preps " << trace.counters.target_state_preps
      << " optimizer_iterations " << trace.counters.optimizer_iterations << "\n";
  out << "final_vars " << trace.final_problem.num_vars << "\n";
}

}  // namespace qfs
