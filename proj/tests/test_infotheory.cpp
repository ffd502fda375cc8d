#include <doctest.h>

#include <array>
#include <cmath>
#include <span>

#include "helpers.hpp"
#include "qfs/infotheory.hpp"

using namespace qfs;
using qfs::testing::col;
using qfs::testing::make_matrix;

namespace {

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

std::span<const int> one(const int& i) { return {&i, 1}; }

// Product distribution of three fair bits, one row per cell.
FeatureMatrix three_fair_bits() {
  return make_matrix({col({0, 0, 0, 0, 1, 1, 1, 1}), col({0, 0, 1, 1, 0, 0, 1, 1})},
                     {0, 1, 0, 1, 0, 1, 0, 1});
}

// a, b independent fair bits; label is their parity.
FeatureMatrix xor_triple() {
  return make_matrix({col({0, 0, 1, 1}), col({0, 1, 0, 1})}, {0, 1, 1, 0});
}

}  // namespace

TEST_CASE("entropy of a fair coin is one bit") {
  const FeatureMatrix m = make_matrix({col({0, 1, 0, 1})}, {0, 0, 0, 0});
  const int c0 = 0;
  CHECK(entropy(m, one(c0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("entropy of a constant column is zero") {
  const FeatureMatrix m = make_matrix({col({1, 1, 1})}, {0, 0, 0});
  const int c0 = 0;
  CHECK(entropy(m, one(c0)) == doctest::Approx(0.0));
}

TEST_CASE("joint entropy of two independent fair bits is two bits") {
  const FeatureMatrix m = make_matrix({col({0, 0, 1, 1}), col({0, 1, 0, 1})}, {0, 0, 0, 0});
  const std::array<int, 2> cols{0, 1};
  CHECK(entropy(m, cols) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("entropy input validation") {
  const FeatureMatrix m = make_matrix({col({0, 1})}, {0, 0});
  CHECK_THROWS(entropy(m, std::span<const int>{}));
  const int bad = 5;
  CHECK_THROWS(entropy(m, one(bad)));
}

TEST_CASE("conditional entropy rejects overlapping column sets") {
  const FeatureMatrix m = make_matrix({col({0, 1}), col({1, 0})}, {0, 1});
  const int c0 = 0;
  CHECK_THROWS(conditional_entropy(m, one(c0), one(c0)));
}

TEST_CASE("conditioning on an independent label leaves entropy unchanged") {
  const FeatureMatrix m = three_fair_bits();
  const int c0 = 0;
  const int y = m.num_features;
  CHECK(conditional_entropy(m, one(c0), one(y)) == doctest::Approx(entropy(m, one(c0))).epsilon(1e-12));
}

TEST_CASE("conditioning on a copy removes all entropy") {
  const FeatureMatrix m = make_matrix({col({0, 1, 1, 0})}, {0, 1, 1, 0});
  const int c0 = 0;
  const int y = m.num_features;
  CHECK(conditional_entropy(m, one(c0), one(y)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mutual information of exactly independent columns is zero") {
  const FeatureMatrix m = three_fair_bits();
  const int c0 = 0, c1 = 1;
  CHECK(mutual_information(m, one(c0), one(c1)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mutual information with a copy equals the entropy") {
  const FeatureMatrix m = make_matrix({col({0, 1, 2, 0}), col({0, 1, 2, 0})}, {0, 0, 0, 0});
  const int c0 = 0, c1 = 1;
  CHECK(mutual_information(m, one(c0), one(c1)) == doctest::Approx(entropy(m, one(c0))).epsilon(1e-9));
}

TEST_CASE("noisy channel with 3:1 counts gives 1 - H(1/4) bits") {
  // b equals a three times out of four.
  const FeatureMatrix m = make_matrix({col({0, 0, 0, 0, 1, 1, 1, 1}), col({0, 0, 0, 1, 1, 1, 1, 0})},
                                      {0, 0, 0, 0, 0, 0, 0, 0});
  const int c0 = 0, c1 = 1;
  const double expected = 1.0 - h2(0.25);
  CHECK(mutual_information(m, one(c0), one(c1)) == doctest::Approx(expected).epsilon(1e-9));
  CHECK(expected == doctest::Approx(0.188722).epsilon(1e-4));
}

TEST_CASE("mutual information agrees with the direct double-sum form") {
  const auto [m, planted] = synthesize_planted(300, 4, 2, 3, 2, 0.2, 3);
  const int a = 0, b = m.num_features;  // feature vs label
  // Independent tabulation of sum p(ab) log2 p(ab)/(p(a)p(b)).
  std::array<std::array<double, 4>, 4> joint{};
  std::array<double, 4> pa{}, pb{};
  for (int r = 0; r < m.num_rows; ++r) {
    joint[m.value(r, a)][m.labels[r]] += 1.0 / m.num_rows;
    pa[m.value(r, a)] += 1.0 / m.num_rows;
    pb[m.labels[r]] += 1.0 / m.num_rows;
  }
  double direct = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (joint[i][j] > 0) direct += joint[i][j] * std::log2(joint[i][j] / (pa[i] * pb[j]));
  CHECK(mutual_information(m, one(a), one(b)) == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("conditional mutual information requires a nonempty conditioning set") {
  const FeatureMatrix m = three_fair_bits();
  const int c0 = 0, c1 = 1;
  CHECK_THROWS(conditional_mutual_information(m, one(c0), one(c1), std::span<const int>{}));
}

TEST_CASE("conditional mutual information of three independent fair bits is zero") {
  const FeatureMatrix m = three_fair_bits();
  const int c0 = 0, c1 = 1, y = m.num_features;
  CHECK(conditional_mutual_information(m, one(c0), one(c1), one(y)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("parity conditioning creates one full bit of conditional information") {
  const FeatureMatrix m = xor_triple();
  const int c0 = 0, c1 = 1, y = m.num_features;
  CHECK(conditional_mutual_information(m, one(c0), one(c1), one(y)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("interaction information reduces to mutual information at two columns") {
  const auto [m, planted] = synthesize_planted(200, 3, 1, 3, 2, 0.3, 17);
  const std::array<int, 2> cols{0, 1};
  const int c0 = 0, c1 = 1;
  CHECK(interaction_information(m, cols) ==
        doctest::Approx(mutual_information(m, one(c0), one(c1))).epsilon(1e-12));
}

TEST_CASE("parity triple has interaction information of minus one bit") {
  // Pure synergy: no pair is informative, the triple is determined.
  const FeatureMatrix m = xor_triple();
  const std::array<int, 3> cols{0, 1, 2};  // third column is the label pseudo-column
  CHECK(interaction_information(m, cols) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("interaction information of independent columns is zero") {
  const FeatureMatrix m = three_fair_bits();
  const std::array<int, 3> cols{0, 1, 2};
  CHECK(interaction_information(m, cols) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("interaction information needs at least two distinct columns") {
  const FeatureMatrix m = three_fair_bits();
  const int c0 = 0;
  CHECK_THROWS(interaction_information(m, one(c0)));
  const std::array<int, 2> dup{0, 0};
  CHECK_THROWS(interaction_information(m, dup));
}

TEST_CASE("entropy is permutation invariant and bounded by the log alphabet sum") {
  const auto [m, planted] = synthesize_planted(150, 5, 2, 4, 3, 0.2, 21);
  const std::array<int, 3> abc{0, 2, 4};
  const std::array<int, 3> cba{4, 0, 2};
  CHECK(entropy(m, abc) == entropy(m, cba));  // canonicalized internally, exact
  double bound = 0.0;
  for (int c : abc) bound += std::log2(m.alphabets[c]);
  CHECK(entropy(m, abc) <= bound + 1e-9);
}

TEST_CASE("mutual information is computed symmetrically to machine precision") {
  const auto [m, planted] = synthesize_planted(500, 6, 3, 4, 3, 0.15, 31);
  for (int i = 0; i < 3; ++i)
    for (int j = 3; j < 6; ++j) {
      const int a = i, b = j;
      CHECK(std::abs(mutual_information(m, one(a), one(b)) - mutual_information(m, one(b), one(a))) <= 1e-12);
    }
}

TEST_CASE("chain rule holds on random matrices") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto [m, planted] = synthesize_planted(217, 6, 2, 4, 3, 0.25, 41 + seed);
    const std::array<int, 2> ab{1, 4};
    const int a = 1, b = 4;
    CHECK(entropy(m, ab) ==
          doctest::Approx(entropy(m, one(a)) + conditional_entropy(m, one(b), one(a))).epsilon(1e-9));
  }
}

TEST_CASE("mutual and conditional mutual information are never meaningfully negative") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto [m, planted] = synthesize_planted(131, 6, 2, 3, 2, 0.4, 61 + seed);
    const int y = m.num_features;
    for (int i = 0; i < m.num_features; ++i)
      for (int j = i + 1; j < m.num_features; ++j) {
        const int a = i, b = j;
        CHECK(mutual_information(m, one(a), one(b)) >= -1e-9);
        CHECK(conditional_mutual_information(m, one(a), one(b), one(y)) >= -1e-9);
      }
  }
}

TEST_CASE("three-column interaction information is symmetric in the conditioning role") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto [m, planted] = synthesize_planted(97, 3, 1, 3, 2, 0.3, 71 + seed);
    const std::array<int, 3> cols{0, 1, 2};
    const double value = interaction_information(m, cols);
    const int perms[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
    for (const auto& perm : perms) {
      const int a = perm[0], b = perm[1], c = perm[2];
      const double via = mutual_information(m, one(a), one(b)) -
                         conditional_mutual_information(m, one(a), one(b), one(c));
      CHECK(value == doctest::Approx(via).epsilon(1e-9));
    }
  }
}

TEST_CASE("joint distributions count every row exactly once") {
  const auto [m, planted] = synthesize_planted(137, 5, 2, 4, 3, 0.3, 91);
  const std::array<int, 3> cols{0, 2, 4};
  const JointDistribution d = JointDistribution::from_columns(m, cols);
  CHECK(d.arity == 3);
  std::int64_t total = 0;
  for (const auto& [key, count] : d.counts) {
    CHECK(count > 0);
    total += count;
  }
  CHECK(total == d.total);
  CHECK(d.total == m.num_rows);
  CHECK(d.counts.size() <= static_cast<std::size_t>(4 * 4 * 4));
}
