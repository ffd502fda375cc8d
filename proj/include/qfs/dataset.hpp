#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qfs {

// Integer-valued sample table: rows are samples, columns are features drawn
// from small per-column alphabets, plus one label column.
struct FeatureMatrix {
  int num_rows = 0;
  int num_features = 0;
  std::vector<int> values;  // row-major, num_rows * num_features
  std::vector<int> alphabets;
  std::vector<int> labels;
  int label_alphabet = 0;
  std::vector<std::string> feature_names;

  int value(int row, int col) const { return values[static_cast<std::size_t>(row) * num_features + col]; }
  // The label is addressable as pseudo-column index num_features.
  int column_value(int row, int col) const { return col == num_features ? labels[row] : value(row, col); }
  int column_alphabet(int col) const { return col == num_features ? label_alphabet : alphabets[col]; }
  void validate() const;
};

// Frozen discretization edges: output level = number of edges strictly below
// the value. Edges are strictly increasing; duplicates produced by ties are
// merged, so levels may be fewer than requested.
struct BinSpec {
  std::vector<double> edges;
  int levels = 2;
  void validate() const;
};

FeatureMatrix load_table(const std::string& path, const std::string& label_column);

// Same parsing but cells are reals; used ahead of a discretization pass.
struct RealTable {
  std::vector<std::string> column_names;
  std::vector<std::vector<double>> columns;
  int num_rows = 0;
};
RealTable load_real_table(const std::string& path);

std::pair<std::vector<int>, BinSpec> quantile_discretize(const std::vector<double>& values, int levels);
std::vector<int> apply_bins(const std::vector<double>& values, const BinSpec& spec);

std::pair<FeatureMatrix, std::vector<int>> synthesize_planted(int samples, int features, int informative,
                                                              int alphabet, int classes, double noise,
                                                              std::uint64_t seed);

// Restriction to a column subset, so problem builders can run on
// pre-clustered feature groups instead of the full enumeration.
FeatureMatrix select_features(const FeatureMatrix& m, const std::vector<int>& columns);

// Sidecar of per-column bin edges, full decimal precision.
void save_binspecs(std::ostream& out, const std::vector<std::string>& names, const std::vector<BinSpec>& specs);
std::pair<std::vector<std::string>, std::vector<BinSpec>> load_binspecs(std::istream& in);

void save_table(std::ostream& out, const FeatureMatrix& m, const std::string& label_name);

}  // namespace qfs
