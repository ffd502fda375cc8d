#include "qfs/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qfs/rng.hpp"

namespace qfs {

namespace {

void check_qubits(int num_qubits, int cap) {
  if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
  if (num_qubits > cap) throw std::invalid_argument("qubit count " + std::to_string(num_qubits) +
                                                    " exceeds simulation cap " + std::to_string(cap));
}

int parity(std::uint64_t x) { return __builtin_parityll(x); }

}  // namespace

double StateVector::norm_squared() const {
  double n = 0.0;
  for (const auto& a : amplitudes) n += std::norm(a);
  return n;
}

void QaoaParams::validate() const {
  if (gammas.empty() || gammas.size() != betas.size())
    throw std::invalid_argument("parameter vectors must be nonempty and of equal length");
}

StateVector prepare_plus_state(int num_qubits, int cap) {
  check_qubits(num_qubits, cap);
  StateVector s;
  s.num_qubits = num_qubits;
  const std::size_t dim = std::size_t{1} << num_qubits;
  s.amplitudes.assign(dim, std::complex<double>(std::pow(2.0, -0.5 * num_qubits), 0.0));
  return s;
}

std::vector<double> build_energy_table(const SpinHamiltonian& h, int cap) {
  check_qubits(h.num_vars, cap);
  const std::size_t dim = std::size_t{1} << h.num_vars;
  std::vector<double> table(dim, h.offset);
  for (const auto& [key, coeff] : h.terms) {
    std::uint64_t mask = 0;
    for (int i : key) mask |= std::uint64_t{1} << i;
    for (std::size_t x = 0; x < dim; ++x) table[x] += parity(x & mask) ? -coeff : coeff;
  }
  return table;
}

void apply_cost_layer_inplace(StateVector& state, const std::vector<double>& energy_table, double gamma) {
  if (energy_table.size() != state.amplitudes.size()) throw std::invalid_argument("energy table dimension mismatch");
  for (std::size_t x = 0; x < energy_table.size(); ++x)
    state.amplitudes[x] *= std::polar(1.0, -gamma * energy_table[x]);
}

void apply_mixer_layer_inplace(StateVector& state, double beta) {
  const double c = std::cos(beta);
  const std::complex<double> ms(0.0, -std::sin(beta));
  const std::size_t dim = state.amplitudes.size();
  for (int q = 0; q < state.num_qubits; ++q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t x = 0; x < dim; ++x) {
      if (x & bit) continue;
      const std::complex<double> a = state.amplitudes[x];
      const std::complex<double> b = state.amplitudes[x | bit];
      state.amplitudes[x] = c * a + ms * b;
      state.amplitudes[x | bit] = ms * a + c * b;
    }
  }
}

StateVector apply_cost_layer(const StateVector& state, const SpinHamiltonian& h, double gamma) {
  if (h.num_vars != state.num_qubits) throw std::invalid_argument("operator/state dimension mismatch");
  StateVector out = state;
  const std::vector<double> table = build_energy_table(h, state.num_qubits);
  apply_cost_layer_inplace(out, table, gamma);
  return out;
}

StateVector apply_mixer_layer(const StateVector& state, double beta) {
  StateVector out = state;
  apply_mixer_layer_inplace(out, beta);
  return out;
}

StateVector run_qaoa_with_table(const std::vector<double>& energy_table, int num_qubits, const QaoaParams& params) {
  params.validate();
  StateVector state = prepare_plus_state(num_qubits, num_qubits);
  for (int l = 0; l < params.depth(); ++l) {
    apply_cost_layer_inplace(state, energy_table, params.gammas[l]);
    apply_mixer_layer_inplace(state, params.betas[l]);
  }
  return state;
}

StateVector run_qaoa(const SpinHamiltonian& h, const QaoaParams& params, int cap) {
  const std::vector<double> table = build_energy_table(h, cap);
  return run_qaoa_with_table(table, h.num_vars, params);
}

double expectation(const StateVector& state, std::span<const int> term) {
  std::uint64_t mask = 0;
  for (int i : term) {
    if (i < 0 || i >= state.num_qubits) throw std::invalid_argument("term index out of range");
    mask |= std::uint64_t{1} << i;
  }
  double acc = 0.0;
  for (std::size_t x = 0; x < state.amplitudes.size(); ++x) {
    const double p = std::norm(state.amplitudes[x]);
    acc += parity(x & mask) ? -p : p;
  }
  return acc;
}

double energy_expectation(const StateVector& state, const SpinHamiltonian& h) {
  if (h.num_vars != state.num_qubits) throw std::invalid_argument("operator/state dimension mismatch");
  double acc = h.offset;
  for (const auto& [key, coeff] : h.terms) acc += coeff * expectation(state, key);
  return acc;
}

double energy_expectation(const StateVector& state, const std::vector<double>& energy_table) {
  if (energy_table.size() != state.amplitudes.size()) throw std::invalid_argument("energy table dimension mismatch");
  double acc = 0.0;
  for (std::size_t x = 0; x < energy_table.size(); ++x) acc += std::norm(state.amplitudes[x]) * energy_table[x];
  return acc;
}

std::vector<std::uint64_t> sample_bitstrings(const StateVector& state, long shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("need at least one shot");
  std::vector<double> cumulative(state.amplitudes.size());
  double acc = 0.0;
  for (std::size_t x = 0; x < state.amplitudes.size(); ++x) {
    acc += std::norm(state.amplitudes[x]);
    cumulative[x] = acc;
  }
  Rng rng(seed);
  std::vector<std::uint64_t> out(static_cast<std::size_t>(shots));
  for (long s = 0; s < shots; ++s) {
    const double u = rng.next_double() * acc;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    out[static_cast<std::size_t>(s)] =
        static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                            static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
  }
  return out;
}

CorrelationDictionary correlation_dictionary(const StateVector& state, const SpinHamiltonian& h) {
  if (h.num_vars != state.num_qubits) throw std::invalid_argument("operator/state dimension mismatch");
  CorrelationDictionary d;
  for (const auto& [key, coeff] : h.terms) d.entries.emplace(key, expectation(state, key));
  return d;
}

}  // namespace qfs
