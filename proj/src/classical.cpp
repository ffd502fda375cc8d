#include "qfs/classical.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_map>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qfs/rng.hpp"
#include "qfs/simulator.hpp"

namespace qfs {

namespace {

// Lexicographic order on spin vectors with +1 before -1: variable 0 is the
// most significant position, and bit set means spin -1.
bool lex_spin_less(std::uint64_t x, std::uint64_t y) {
  const std::uint64_t diff = x ^ y;
  if (diff == 0) return false;
  const std::uint64_t lowest = diff & (~diff + 1);
  return (x & lowest) == 0;
}

std::vector<int> spins_from_label(std::uint64_t x, int n) {
  std::vector<int> spins(n);
  for (int i = 0; i < n; ++i) spins[i] = (x >> i) & 1 ? -1 : +1;
  return spins;
}

}  // namespace

SpinSolution brute_force(const SpinHamiltonian& h, int cap) {
  if (h.num_vars < 1) throw std::invalid_argument("empty operator");
  if (h.num_vars > cap)
    throw std::invalid_argument("problem size " + std::to_string(h.num_vars) +
                                " exceeds the exhaustive-search cap " + std::to_string(cap));
  const std::vector<double> table = build_energy_table(h, cap);
  std::uint64_t best = 0;
  double best_energy = table[0];
  for (std::uint64_t x = 1; x < table.size(); ++x) {
    if (table[x] < best_energy || (table[x] == best_energy && lex_spin_less(x, best))) {
      best_energy = table[x];
      best = x;
    }
  }
  return {spins_from_label(best, h.num_vars), best_energy};
}

BinarySolution brute_force_cardinality(const PolyBinaryProblem& p, std::uint64_t max_subsets) {
  if (!p.cardinality) throw std::invalid_argument("problem must carry a cardinality target");
  const int n = p.num_vars;
  const int k = *p.cardinality;
  if (k < 0 || k > n) throw std::invalid_argument("cardinality out of range");
  if (n > 63) throw std::invalid_argument("constrained exhaustive search handles at most 63 variables");
  double subsets = 1.0;
  for (int i = 1; i <= k; ++i) subsets = subsets * (n - k + i) / i;
  if (subsets > static_cast<double>(max_subsets))
    throw std::invalid_argument("subset count exceeds the exhaustive-search cap");

  // Hash terms by bitmask; a selection's energy sums the coefficients of
  // term masks contained in it, enumerated from the chosen indices.
  std::unordered_map<std::uint64_t, double> by_mask;
  by_mask.reserve(p.terms.size());
  int max_order = 0;
  for (const auto& [key, coeff] : p.terms) {
    std::uint64_t mask = 0;
    for (int i : key) mask |= std::uint64_t{1} << i;
    by_mask.emplace(mask, coeff);
    max_order = std::max(max_order, static_cast<int>(key.size()));
  }
  auto lookup = [&](std::uint64_t mask) {
    const auto it = by_mask.find(mask);
    return it == by_mask.end() ? 0.0 : it->second;
  };

  std::vector<int> choice(k);
  for (int i = 0; i < k; ++i) choice[i] = i;
  std::vector<int> best_bits(n, 0);
  double best_energy = p.constant;
  bool first = true;
  while (k > 0) {
    double e = p.constant;
    for (int a = 0; a < k; ++a) {
      const std::uint64_t ma = std::uint64_t{1} << choice[a];
      e += lookup(ma);
      if (max_order < 2) continue;
      for (int b = a + 1; b < k; ++b) {
        const std::uint64_t mb = ma | (std::uint64_t{1} << choice[b]);
        e += lookup(mb);
        if (max_order < 3) continue;
        for (int c = b + 1; c < k; ++c) e += lookup(mb | (std::uint64_t{1} << choice[c]));
      }
    }
    if (max_order > 3) {  // rare: fall back to a direct term scan
      e = p.constant;
      std::uint64_t sel = 0;
      for (int i : choice) sel |= std::uint64_t{1} << i;
      for (const auto& [mask, coeff] : by_mask)
        if ((mask & sel) == mask) e += coeff;
    }
    if (first || e < best_energy) {
      first = false;
      best_energy = e;
      std::fill(best_bits.begin(), best_bits.end(), 0);
      for (int i : choice) best_bits[i] = 1;
    }
    // Next combination in lexicographic order.
    int i = k - 1;
    while (i >= 0 && choice[i] == n - k + i) --i;
    if (i < 0) break;
    ++choice[i];
    for (int j = i + 1; j < k; ++j) choice[j] = choice[j - 1] + 1;
  }
  return {std::move(best_bits), best_energy};
}

namespace {

struct TabuInstance {
  int n = 0;
  std::vector<TermKey> keys;
  std::vector<double> coeffs;
  std::vector<std::vector<int>> terms_of_var;

  explicit TabuInstance(const SpinHamiltonian& h) : n(h.num_vars), terms_of_var(h.num_vars) {
    for (const auto& [key, coeff] : h.terms) {
      const int t = static_cast<int>(keys.size());
      keys.push_back(key);
      coeffs.push_back(coeff);
      for (int i : key) terms_of_var[i].push_back(t);
    }
  }
};

}  // namespace

TabuResult tabu_search(const SpinHamiltonian& h, const TabuConfig& config) {
  if (h.num_vars < 1) throw std::invalid_argument("empty operator");
  const int n = h.num_vars;
  const long iterations = config.iterations >= 0 ? config.iterations : 500L * n;
  const int tenure = config.tenure >= 0 ? config.tenure : (n + 3) / 4;
  const TabuInstance inst(h);
  Rng rng(config.seed);

  auto seconds_since = [](std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
  };

  TabuResult result;
  result.energy = std::numeric_limits<double>::infinity();

  std::vector<int> spins(n);
  std::vector<double> term_value(inst.keys.size());
  std::vector<double> flip_gain(n);
  std::vector<long> tabu_until(n);

  for (int restart = 0; restart < std::max(1, config.restarts); ++restart) {
    for (int i = 0; i < n; ++i) spins[i] = rng.next_below(2) ? -1 : +1;
    double energy = h.offset;
    for (std::size_t t = 0; t < inst.keys.size(); ++t) {
      int prod = 1;
      for (int i : inst.keys[t]) prod *= spins[i];
      term_value[t] = inst.coeffs[t] * prod;
      energy += term_value[t];
    }
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int t : inst.terms_of_var[i]) s += term_value[t];
      flip_gain[i] = -2.0 * s;
    }
    std::fill(tabu_until.begin(), tabu_until.end(), -1L);

    double incumbent = energy;
    std::vector<int> incumbent_spins = spins;
    long last_improvement_iter = 0;
    auto last_improvement_time = std::chrono::steady_clock::now();

    for (long iter = 0; iter < iterations; ++iter) {
      if (config.improvement_timeout_iters > 0 && iter - last_improvement_iter >= config.improvement_timeout_iters) {
        result.timeout_hit = true;
        break;
      }
      if (config.improvement_timeout_seconds > 0.0 &&
          seconds_since(last_improvement_time) >= config.improvement_timeout_seconds) {
        result.timeout_hit = true;
        break;
      }

      int move = -1;
      double move_gain = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        const bool tabu = tabu_until[i] > iter;
        const bool aspirated = energy + flip_gain[i] < incumbent - 1e-12;
        if (tabu && !aspirated) continue;
        if (flip_gain[i] < move_gain) {
          move_gain = flip_gain[i];
          move = i;
        }
      }
      if (move < 0) {
        // Everything tabu without aspiration: flip a random variable.
        move = static_cast<int>(rng.next_below(n));
        move_gain = flip_gain[move];
      }

      spins[move] = -spins[move];
      energy += move_gain;
      tabu_until[move] = iter + tenure;
      for (int t : inst.terms_of_var[move]) {
        const double old_value = term_value[t];
        term_value[t] = -old_value;
        for (int j : inst.keys[t]) flip_gain[j] += 4.0 * old_value;
      }

      if (energy < incumbent - 1e-12) {
        incumbent = energy;
        incumbent_spins = spins;
        last_improvement_iter = iter;
        last_improvement_time = std::chrono::steady_clock::now();
      }
      ++result.iterations_used;
    }

    if (incumbent < result.energy) {
      result.energy = incumbent;
      result.spins = incumbent_spins;
    }
  }
  return result;
}

ReductionTrace random_edge_fix(const SpinHamiltonian& h, int cutoff, std::uint64_t seed) {
  if (cutoff < 1 || cutoff >= h.num_vars) throw std::invalid_argument("cutoff must be in [1, num_vars)");
  Rng rng(seed);
  ReductionTrace trace;
  trace.original_num_vars = h.num_vars;
  SpinHamiltonian current = h;
  int round = 0;
  while (current.num_vars > cutoff) {
    if (current.num_vars < 2 || current.terms.empty()) {
      trace.stopped_early = true;
      break;
    }
    const std::size_t pick = rng.next_below(current.terms.size());
    auto it = current.terms.begin();
    std::advance(it, static_cast<long>(pick));
    EdgeFix fix;
    fix.term = it->first;
    fix.sign = rng.next_below(2) ? -1 : +1;
    fix.eliminated = fix.term[rng.next_below(fix.term.size())];
    fix.round = round++;
    auto [reduced, map] = apply_edge_fix(current, fix.term, fix.sign, fix.eliminated);
    trace.fixes.push_back(std::move(fix));
    trace.variable_maps.push_back(std::move(map));
    current = std::move(reduced);
  }
  trace.final_problem = std::move(current);
  return trace;
}

namespace {

std::pair<int, int> most_frequent_pair(const std::vector<TermKey>& cubics) {
  std::map<std::pair<int, int>, int> counts;
  for (const TermKey& key : cubics) {
    counts[{key[0], key[1]}]++;
    counts[{key[0], key[2]}]++;
    counts[{key[1], key[2]}]++;
  }
  std::pair<int, int> best{-1, -1};
  int best_count = 0;
  for (const auto& [pair, count] : counts) {
    if (count > best_count) {  // map order breaks ties toward the smallest pair
      best_count = count;
      best = pair;
    }
  }
  return best;
}

}  // namespace

OrderReduction reduce_order(const PolyBinaryProblem& p, double penalty) {
  if (p.max_order() > 3) throw std::invalid_argument("order reduction handles at most cubic inputs");
  if (!(penalty > 0.0)) throw std::invalid_argument("penalty must be positive");

  OrderReduction out;
  out.original_num_vars = p.num_vars;
  out.problem = p;
  if (p.max_order() < 3) return out;

  PolyBinaryProblem& q = out.problem;
  std::vector<TermKey> cubic_keys;
  std::vector<double> cubic_coeffs;
  for (const auto& [key, coeff] : q.terms)
    if (key.size() == 3) {
      cubic_keys.push_back(key);
      cubic_coeffs.push_back(coeff);
    }
  for (const TermKey& key : cubic_keys) q.terms.erase(key);

  while (!cubic_keys.empty()) {
    const auto [a, b] = most_frequent_pair(cubic_keys);
    const int ancilla = q.num_vars++;
    out.ancillas.push_back({ancilla, {a, b}});
    // Penalty vanishes exactly when x_ancilla = x_a * x_b; the ancilla index
    // is always the largest, so these keys are sorted.
    q.add_term({a, b}, penalty);
    q.add_term({a, ancilla}, -2.0 * penalty);
    q.add_term({b, ancilla}, -2.0 * penalty);
    q.add_term({ancilla}, 3.0 * penalty);

    std::vector<TermKey> remaining_keys;
    std::vector<double> remaining_coeffs;
    for (std::size_t t = 0; t < cubic_keys.size(); ++t) {
      const TermKey& key = cubic_keys[t];
      const bool has_a = std::binary_search(key.begin(), key.end(), a);
      const bool has_b = std::binary_search(key.begin(), key.end(), b);
      if (has_a && has_b) {
        int other = -1;
        for (int i : key)
          if (i != a && i != b) other = i;
        q.add_term({std::min(other, ancilla), std::max(other, ancilla)}, cubic_coeffs[t]);
      } else {
        remaining_keys.push_back(key);
        remaining_coeffs.push_back(cubic_coeffs[t]);
      }
    }
    cubic_keys = std::move(remaining_keys);
    cubic_coeffs = std::move(remaining_coeffs);
  }
  q.canonicalize();
  return out;
}

}  // namespace qfs
