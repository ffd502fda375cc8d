#include <doctest.h>

#include <array>
#include <cmath>
#include <span>
#include <sstream>

#include "helpers.hpp"
#include "qfs/classical.hpp"
#include "qfs/infotheory.hpp"
#include "qfs/pcbo.hpp"

using namespace qfs;
using qfs::testing::col;
using qfs::testing::make_matrix;
using qfs::testing::random_problem;

namespace {

std::vector<int> bits_of(std::uint64_t x, int n) {
  std::vector<int> bits(n);
  for (int i = 0; i < n; ++i) bits[i] = (x >> i) & 1;
  return bits;
}

std::vector<int> spins_of(std::uint64_t x, int n) {
  std::vector<int> spins(n);
  for (int i = 0; i < n; ++i) spins[i] = (x >> i) & 1 ? -1 : +1;
  return spins;
}

std::span<const int> one(const int& i) { return {&i, 1}; }

}  // namespace

TEST_CASE("mrmr on mutually independent columns produces an empty problem") {
  // Exact product over three fair bits: all plug-in scores vanish.
  const FeatureMatrix m = make_matrix({col({0, 0, 0, 0, 1, 1, 1, 1}), col({0, 0, 1, 1, 0, 0, 1, 1})},
                                      {0, 1, 0, 1, 0, 1, 0, 1});
  const PolyBinaryProblem p = build_mrmr(m, 1.0);
  CHECK(p.terms.empty());
}

TEST_CASE("mrmr relevance term equals minus the label entropy for a label copy") {
  const FeatureMatrix m = make_matrix({col({0, 0, 1, 1}), col({0, 1, 0, 1})}, {0, 0, 1, 1});
  const PolyBinaryProblem p = build_mrmr(m, 1.0);
  const int y = m.num_features;
  const double hy = entropy(m, one(y));
  REQUIRE(p.terms.count({0}) == 1);
  CHECK(p.terms.at({0}) == doctest::Approx(-hy).epsilon(1e-12));
  CHECK(p.terms.count({1}) == 0);     // distractor has zero relevance
  CHECK(p.terms.count({0, 1}) == 0);  // independent pair has zero redundancy
}

TEST_CASE("mrmr penalizes duplicated features with the accumulated pair weight") {
  const FeatureMatrix m = make_matrix({col({0, 1, 0, 1}), col({0, 1, 0, 1})}, {0, 0, 1, 1});
  const PolyBinaryProblem p = build_mrmr(m, 1.0);
  const int c0 = 0;
  // Both (i,j) orderings fold onto the sorted pair, doubling I(f0;f1) = H(f0).
  CHECK(p.terms.at({0, 1}) == doctest::Approx(2.0 * entropy(m, one(c0))).epsilon(1e-12));
}

TEST_CASE("miqubo on a single feature has no quadratic part") {
  const FeatureMatrix m = make_matrix({col({0, 1, 0, 1})}, {0, 1, 0, 1});
  const PolyBinaryProblem p = build_miqubo(m, 1.0);
  CHECK(p.terms.size() == 1);
  CHECK(p.terms.at({0}) == doctest::Approx(-1.0));
}

TEST_CASE("miqubo rewards the parity pair with minus two bits") {
  const FeatureMatrix m = make_matrix({col({0, 0, 1, 1}), col({0, 1, 0, 1})}, {0, 1, 1, 0});
  const PolyBinaryProblem p = build_miqubo(m, 1.0);
  CHECK(p.terms.at({0, 1}) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(p.terms.count({0}) == 0);  // individually uninformative
}

TEST_CASE("full-qubo on pure distractors is the zero problem") {
  const FeatureMatrix m = make_matrix({col({0, 0, 0, 0, 1, 1, 1, 1}), col({0, 0, 1, 1, 0, 0, 1, 1})},
                                      {0, 1, 0, 1, 0, 1, 0, 1});
  const PolyBinaryProblem p = build_full_qubo(m, 10.0);
  CHECK(p.terms.empty());
}

TEST_CASE("full-qubo penalizes a duplicated informative feature") {
  const FeatureMatrix m = make_matrix({col({0, 1, 0, 1}), col({0, 1, 0, 1})}, {0, 1, 0, 1});
  const PolyBinaryProblem p = build_full_qubo(m, 1.0);
  // I(f0;f1) = 1 doubled; the conditional terms vanish given the duplicate.
  CHECK(p.terms.at({0, 1}) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(p.terms.at({0, 1}) > 0.0);
}

TEST_CASE("entropy-cubo first-order weighting matches the scaled label information") {
  const FeatureMatrix m = make_matrix({col({0, 1, 0, 1}), col({0, 0, 1, 1})}, {0, 1, 0, 1});
  const int k = 2;
  const PolyBinaryProblem p = build_entropy_cubo(m, AlphaWeights{1.0, 0.0, 0.0}, k);
  const int y = m.num_features;
  CHECK(p.cardinality == k);
  CHECK(p.terms.at({0}) == doctest::Approx(-entropy(m, one(y)) / k).epsilon(1e-12));
}

TEST_CASE("entropy-cubo third-order block emits one cubic per triple") {
  const FeatureMatrix m = make_matrix({col({0, 0, 1, 1}), col({0, 1, 0, 1}), col({0, 1, 1, 0})}, {0, 1, 1, 0});
  const PolyBinaryProblem p = build_entropy_cubo(m, AlphaWeights{0.0, 0.0, 1.0}, 3);
  REQUIRE(p.terms.size() == 1);
  const std::array<int, 3> cols{0, 1, 2};
  const int y = m.num_features;
  const double expected = -(entropy(m, cols) - conditional_entropy(m, cols, one(y)));
  CHECK(p.terms.at({0, 1, 2}) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("entropy-cubo coefficients are never positive") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto [m, planted] = synthesize_planted(120, 7, 2, 4, 3, 0.2, 81 + seed);
    const PolyBinaryProblem p = build_entropy_cubo(m, AlphaWeights{0.2, 0.3, 0.5}, 4);
    for (const auto& [key, coeff] : p.terms) CHECK(coeff <= 0.0);
  }
}

TEST_CASE("entropy-cubo validates its arguments") {
  const auto [m, planted] = synthesize_planted(50, 5, 1, 3, 2, 0.1, 9);
  CHECK_THROWS(build_entropy_cubo(m, AlphaWeights{0, 0, 1}, 2));   // k too small for cubic block
  CHECK_THROWS(build_entropy_cubo(m, AlphaWeights{0, 0, 1}, 6));   // k > F
  CHECK_THROWS(build_entropy_cubo(m, AlphaWeights{0.5, 0, 0}, 3));  // weights must sum to 1
}

TEST_CASE("cardinality penalty expands to the expected small-case terms") {
  PolyBinaryProblem p;
  p.num_vars = 2;
  p.cardinality = 1;
  const PolyBinaryProblem q = apply_cardinality_penalty(p, 1.0);
  CHECK(!q.cardinality);
  CHECK(q.constant == doctest::Approx(1.0));
  CHECK(q.terms.at({0}) == doctest::Approx(-1.0));
  CHECK(q.terms.at({1}) == doctest::Approx(-1.0));
  CHECK(q.terms.at({0, 1}) == doctest::Approx(2.0));
  const std::vector<int> b10{1, 0}, b01{0, 1}, b00{0, 0}, b11{1, 1};
  CHECK(evaluate_binary(q, b10) == doctest::Approx(0.0));
  CHECK(evaluate_binary(q, b01) == doctest::Approx(0.0));
  CHECK(evaluate_binary(q, b00) == doctest::Approx(1.0));
  CHECK(evaluate_binary(q, b11) == doctest::Approx(1.0));
}

TEST_CASE("zero-target penalty leaves the all-zero selection untouched") {
  PolyBinaryProblem p;
  p.num_vars = 3;
  p.cardinality = 0;
  const PolyBinaryProblem q = apply_cardinality_penalty(p, 2.0);
  const std::vector<int> zero{0, 0, 0};
  CHECK(evaluate_binary(q, zero) == doctest::Approx(0.0));
  CHECK(q.terms.at({0}) == doctest::Approx(2.0));
  CHECK(q.terms.at({0, 2}) == doctest::Approx(4.0));
}

TEST_CASE("penalty preserves energies of target-size selections") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    PolyBinaryProblem p = random_problem(8, 300 + seed);
    p.cardinality = 3;
    const PolyBinaryProblem q = apply_cardinality_penalty(p, kDefaultCardinalityPenalty);
    PolyBinaryProblem unconstrained = p;
    unconstrained.cardinality.reset();
    for (std::uint64_t x = 0; x < (1u << 8); ++x) {
      const std::vector<int> bits = bits_of(x, 8);
      if (__builtin_popcountll(x) == 3)
        CHECK(evaluate_binary(q, bits) == doctest::Approx(evaluate_binary(unconstrained, bits)).epsilon(1e-12));
      else
        CHECK(evaluate_binary(q, bits) > evaluate_binary(unconstrained, bits));
    }
  }
}

TEST_CASE("penalty requires a target and a positive multiplier") {
  PolyBinaryProblem p;
  p.num_vars = 2;
  CHECK_THROWS(apply_cardinality_penalty(p, 1.0));
  p.cardinality = 1;
  CHECK_THROWS(apply_cardinality_penalty(p, 0.0));
}

TEST_CASE("spin conversion of a single linear term") {
  PolyBinaryProblem p;
  p.num_vars = 1;
  p.add_term({0}, 0.8);
  const SpinHamiltonian h = to_spin(p);
  CHECK(h.offset == doctest::Approx(0.4));
  CHECK(h.terms.at({0}) == doctest::Approx(-0.4));
}

TEST_CASE("spin conversion of a product pair") {
  PolyBinaryProblem p;
  p.num_vars = 2;
  p.add_term({0, 1}, 1.0);
  const SpinHamiltonian h = to_spin(p);
  CHECK(h.offset == doctest::Approx(0.25));
  CHECK(h.terms.at({0}) == doctest::Approx(-0.25));
  CHECK(h.terms.at({1}) == doctest::Approx(-0.25));
  CHECK(h.terms.at({0, 1}) == doctest::Approx(0.25));
}

TEST_CASE("spin conversion of a triple product alternates signs by weight") {
  PolyBinaryProblem p;
  p.num_vars = 3;
  p.add_term({0, 1, 2}, 1.0);
  const SpinHamiltonian h = to_spin(p);
  CHECK(h.offset == doctest::Approx(0.125));
  for (const TermKey& key : {TermKey{0}, TermKey{1}, TermKey{2}})
    CHECK(h.terms.at(key) == doctest::Approx(-0.125));
  for (const TermKey& key : {TermKey{0, 1}, TermKey{0, 2}, TermKey{1, 2}})
    CHECK(h.terms.at(key) == doctest::Approx(0.125));
  CHECK(h.terms.at({0, 1, 2}) == doctest::Approx(-0.125));
}

TEST_CASE("to_spin refuses unabsorbed cardinality constraints") {
  PolyBinaryProblem p;
  p.num_vars = 2;
  p.cardinality = 1;
  CHECK_THROWS(to_spin(p));
}

TEST_CASE("binary and spin evaluations agree over every bitstring") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 4 + static_cast<int>(seed % 5);
    const PolyBinaryProblem p = random_problem(n, 500 + seed);
    const SpinHamiltonian h = to_spin(p);
    for (std::uint64_t x = 0; x < (1ull << n); ++x) {
      CHECK(evaluate_binary(p, bits_of(x, n)) ==
            doctest::Approx(evaluate_spin(h, spins_of(x, n))).epsilon(1e-9));
    }
  }
}

TEST_CASE("evaluate handles the trivial bitstrings") {
  const PolyBinaryProblem p = random_problem(6, 42);
  const std::vector<int> zeros(6, 0), ones(6, 1);
  CHECK(evaluate_binary(p, zeros) == doctest::Approx(p.constant));
  double total = p.constant;
  for (const auto& [key, coeff] : p.terms) total += coeff;
  CHECK(evaluate_binary(p, ones) == doctest::Approx(total));

  const SpinHamiltonian h = to_spin(p);
  const std::vector<int> up(6, +1);
  double spin_total = h.offset;
  for (const auto& [key, coeff] : h.terms) spin_total += coeff;
  CHECK(evaluate_spin(h, up) == doctest::Approx(spin_total));
}

TEST_CASE("evaluate validates inputs") {
  const PolyBinaryProblem p = random_problem(4, 1);
  const std::vector<int> short_bits{0, 1};
  CHECK_THROWS(evaluate_binary(p, short_bits));
  const SpinHamiltonian h = to_spin(p);
  const std::vector<int> bad_spins{1, 1, 0, 1};
  CHECK_THROWS(evaluate_spin(h, bad_spins));
}

TEST_CASE("building the same problem twice yields identical term maps") {
  const auto [m, planted] = synthesize_planted(90, 6, 2, 4, 3, 0.2, 55);
  const PolyBinaryProblem a = build_entropy_cubo(m, AlphaWeights{0, 0, 1}, 4);
  const PolyBinaryProblem b = build_entropy_cubo(m, AlphaWeights{0, 0, 1}, 4);
  CHECK(a.terms == b.terms);
  CHECK(a.constant == b.constant);
}

TEST_CASE("default penalty keeps the unconstrained minimum feasible on realistic instances") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto [m, planted] = synthesize_planted(150, 12, 3, 4, 3, 0.15, 200 + seed);
    PolyBinaryProblem p = build_entropy_cubo(m, AlphaWeights{0, 0, 1}, 6);
    const int target = *p.cardinality;
    const SpinHamiltonian h = to_spin(apply_cardinality_penalty(p, kDefaultCardinalityPenalty));
    const SpinSolution sol = brute_force(h);
    int selected = 0;
    for (int s : sol.spins) selected += s < 0 ? 1 : 0;
    CHECK(selected == target);
  }
}

TEST_CASE("problem files round-trip through the text format") {
  PolyBinaryProblem p = random_problem(7, 77);
  p.cardinality = 3;
  std::stringstream buffer;
  save_problem(buffer, p);
  const PolyBinaryProblem q = load_problem(buffer);
  CHECK(q.num_vars == p.num_vars);
  CHECK(q.terms == p.terms);
  CHECK(q.constant == p.constant);
  CHECK(q.cardinality == p.cardinality);

  const SpinHamiltonian h = to_spin(random_problem(5, 78));
  std::stringstream hbuf;
  save_hamiltonian(hbuf, h);
  const SpinHamiltonian g = load_hamiltonian(hbuf);
  CHECK(g.terms == h.terms);
  CHECK(g.offset == h.offset);
}

TEST_CASE("problem loader rejects malformed input") {
  std::stringstream missing_header("terms 3\n");
  CHECK_THROWS(load_problem(missing_header));
  std::stringstream bad_index("vars 2 offset 0\n5 1.0\n");
  CHECK_THROWS(load_problem(bad_index));
  std::stringstream duplicate("vars 2 offset 0\n0 1.0\n0 2.0\n");
  CHECK_THROWS(load_problem(duplicate));
}
