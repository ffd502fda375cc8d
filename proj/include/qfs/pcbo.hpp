#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qfs/dataset.hpp"

namespace qfs {

using TermKey = std::vector<int>;  // sorted, strictly increasing variable indices
using TermMap = std::map<TermKey, double>;

// Polynomial over {0,1} variables with an optional selection-size target.
// Canonical form: sorted keys, no duplicates, no stored zero coefficients.
struct PolyBinaryProblem {
  int num_vars = 0;
  TermMap terms;
  double constant = 0.0;
  std::optional<int> cardinality;

  void add_term(TermKey key, double coeff);
  void canonicalize();
  int max_order() const;
};

// Polynomial over +-1 spins (diagonal Pauli-Z strings) plus a scalar offset.
// Term order may exceed 3: variable elimination can raise it.
struct SpinHamiltonian {
  int num_vars = 0;
  TermMap terms;
  double offset = 0.0;

  void add_term(TermKey key, double coeff);
  void canonicalize();
  int max_order() const;
  double total_abs_weight() const;
};

struct AlphaWeights {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 1.0;
  void validate() const;  // a1 + a2 + a3 == 1 within 1e-12
};

PolyBinaryProblem build_mrmr(const FeatureMatrix& m, double lambda);
PolyBinaryProblem build_miqubo(const FeatureMatrix& m, double lambda);
PolyBinaryProblem build_full_qubo(const FeatureMatrix& m, double lambda);
PolyBinaryProblem build_entropy_cubo(const FeatureMatrix& m, const AlphaWeights& alpha, int k);

// Adds lambda_c * (sum x_i - n)^2 expanded over binary variables and clears
// the cardinality target. Energies of size-n selections are unchanged.
PolyBinaryProblem apply_cardinality_penalty(const PolyBinaryProblem& p, double lambda_c);

// x_i -> (1 - Z_i)/2. Requires the cardinality constraint to be absorbed first.
SpinHamiltonian to_spin(const PolyBinaryProblem& p);

double evaluate_binary(const PolyBinaryProblem& p, std::span<const int> bits);
double evaluate_spin(const SpinHamiltonian& h, std::span<const int> spins);

// Line-oriented interchange format shared by both polynomial forms:
//   vars N offset C
//   [cardinality K]
//   i[,j[,k,...]] coefficient
void save_terms(std::ostream& out, int num_vars, const TermMap& terms, double offset,
                std::optional<int> cardinality);
void save_problem(std::ostream& out, const PolyBinaryProblem& p);
void save_hamiltonian(std::ostream& out, const SpinHamiltonian& h);
PolyBinaryProblem load_problem(std::istream& in);
SpinHamiltonian load_hamiltonian(std::istream& in);
PolyBinaryProblem load_problem_file(const std::string& path);

constexpr double kCoefficientEpsilon = 1e-12;
constexpr double kDefaultCardinalityPenalty = 5.0;

}  // namespace qfs
