#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "qfs/pcbo.hpp"

namespace qfs {

// Variable i occupies bit i of the basis-state label (little-endian) in every
// module; spin value s_i = 1 - 2*bit_i.
constexpr int kDefaultQubitCap = 24;

struct StateVector {
  std::vector<std::complex<double>> amplitudes;
  int num_qubits = 0;

  double norm_squared() const;
};

struct QaoaParams {
  std::vector<double> gammas;
  std::vector<double> betas;

  int depth() const { return static_cast<int>(gammas.size()); }
  void validate() const;
};

// One expectation value per Hamiltonian term, all orders.
struct CorrelationDictionary {
  std::map<TermKey, double> entries;
};

StateVector prepare_plus_state(int num_qubits, int cap = kDefaultQubitCap);

// Diagonal energies E(x) for every basis state, offset included. Built once
// per Hamiltonian and reused across layers and parameter evaluations.
std::vector<double> build_energy_table(const SpinHamiltonian& h, int cap = kDefaultQubitCap);

StateVector apply_cost_layer(const StateVector& state, const SpinHamiltonian& h, double gamma);
StateVector apply_mixer_layer(const StateVector& state, double beta);
void apply_cost_layer_inplace(StateVector& state, const std::vector<double>& energy_table, double gamma);
void apply_mixer_layer_inplace(StateVector& state, double beta);

StateVector run_qaoa(const SpinHamiltonian& h, const QaoaParams& params, int cap = kDefaultQubitCap);
StateVector run_qaoa_with_table(const std::vector<double>& energy_table, int num_qubits, const QaoaParams& params);

double expectation(const StateVector& state, std::span<const int> term);
double energy_expectation(const StateVector& state, const SpinHamiltonian& h);
double energy_expectation(const StateVector& state, const std::vector<double>& energy_table);

std::vector<std::uint64_t> sample_bitstrings(const StateVector& state, long shots, std::uint64_t seed);

CorrelationDictionary correlation_dictionary(const StateVector& state, const SpinHamiltonian& h);

}  // namespace qfs
