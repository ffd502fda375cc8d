#include "qfs/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qfs {

namespace {

void check_columns(const FeatureMatrix& m, std::span<const int> columns) {
  if (columns.empty()) throw std::invalid_argument("column list must be nonempty");
  for (int c : columns)
    if (c < 0 || c > m.num_features) throw std::invalid_argument("column index out of range: " + std::to_string(c));
}

void check_disjoint(std::span<const int> a, std::span<const int> b, const char* what) {
  for (int x : a)
    for (int y : b)
      if (x == y) throw std::invalid_argument(std::string("column lists must be disjoint (") + what + ")");
}

std::vector<int> sorted_union(std::span<const int> a, std::span<const int> b) {
  std::vector<int> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

JointDistribution JointDistribution::from_columns(const FeatureMatrix& m, std::span<const int> columns) {
  check_columns(m, columns);
  // Entropy is permutation-invariant in the column list; sorting makes the
  // count map (and thus the floating-point summation order) canonical.
  std::vector<int> cols(columns.begin(), columns.end());
  std::sort(cols.begin(), cols.end());

  std::vector<std::uint64_t> strides(cols.size());
  std::uint64_t stride = 1;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    strides[i] = stride;
    const std::uint64_t a = static_cast<std::uint64_t>(m.column_alphabet(cols[i]));
    if (stride > std::numeric_limits<std::uint64_t>::max() / 4 / a)
      throw std::invalid_argument("joint alphabet too large to encode");
    stride *= a;
  }

  JointDistribution d;
  d.arity = static_cast<int>(cols.size());
  d.total = m.num_rows;
  d.counts.reserve(static_cast<std::size_t>(std::min<std::int64_t>(m.num_rows, static_cast<std::int64_t>(stride))));
  for (int r = 0; r < m.num_rows; ++r) {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < cols.size(); ++i)
      key += strides[i] * static_cast<std::uint64_t>(m.column_value(r, cols[i]));
    ++d.counts[key];
  }
  return d;
}

double JointDistribution::entropy_bits() const {
  if (total <= 0) throw std::invalid_argument("empty distribution");
  // H = log2(T) - (1/T) sum c*log2(c); zero-count cells contribute nothing.
  double acc = 0.0;
  for (const auto& [key, c] : counts) acc += static_cast<double>(c) * std::log2(static_cast<double>(c));
  return std::log2(static_cast<double>(total)) - acc / static_cast<double>(total);
}

double entropy(const FeatureMatrix& m, std::span<const int> columns) {
  if (m.num_rows < 1) throw std::invalid_argument("empty matrix");
  return JointDistribution::from_columns(m, columns).entropy_bits();
}

double conditional_entropy(const FeatureMatrix& m, std::span<const int> columns, std::span<const int> given) {
  check_columns(m, columns);
  check_columns(m, given);
  check_disjoint(columns, given, "columns vs given");
  const std::vector<int> joint = sorted_union(columns, given);
  return entropy(m, joint) - entropy(m, given);
}

double mutual_information(const FeatureMatrix& m, std::span<const int> a, std::span<const int> b) {
  check_columns(m, a);
  check_columns(m, b);
  check_disjoint(a, b, "a vs b");
  return entropy(m, a) - conditional_entropy(m, a, b);
}

double conditional_mutual_information(const FeatureMatrix& m, std::span<const int> a, std::span<const int> b,
                                      std::span<const int> given) {
  check_columns(m, a);
  check_columns(m, b);
  check_columns(m, given);
  check_disjoint(a, b, "a vs b");
  check_disjoint(a, given, "a vs given");
  check_disjoint(b, given, "b vs given");
  return conditional_entropy(m, a, given) + conditional_entropy(m, b, given) -
         conditional_entropy(m, sorted_union(a, b), given);
}

namespace {

// I(X1;...;Xk | Z) with the recursion
// I(X1;...;Xk | Z) = I(X1;...;X_{k-1} | Z) - I(X1;...;X_{k-1} | Z u {Xk}).
double interaction_given(const FeatureMatrix& m, std::span<const int> columns, std::vector<int> given) {
  if (columns.size() == 2) {
    const int a = columns[0];
    const int b = columns[1];
    if (given.empty()) return mutual_information(m, std::span<const int>(&a, 1), std::span<const int>(&b, 1));
    return conditional_mutual_information(m, std::span<const int>(&a, 1), std::span<const int>(&b, 1), given);
  }
  std::span<const int> head = columns.subspan(0, columns.size() - 1);
  std::vector<int> extended = given;
  extended.push_back(columns.back());
  return interaction_given(m, head, given) - interaction_given(m, head, std::move(extended));
}

}  // namespace

double interaction_information(const FeatureMatrix& m, std::span<const int> columns) {
  if (columns.size() < 2) throw std::invalid_argument("interaction information needs at least 2 columns");
  check_columns(m, columns);
  for (std::size_t i = 0; i < columns.size(); ++i)
    for (std::size_t j = i + 1; j < columns.size(); ++j)
      if (columns[i] == columns[j]) throw std::invalid_argument("interaction information columns must be distinct");
  return interaction_given(m, columns, {});
}

}  // namespace qfs
