#include "qfs/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qfs/rng.hpp"

namespace qfs {

namespace {

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

char detect_delimiter(const std::string& header) {
  if (header.find('\t') != std::string::npos) return '\t';
  if (header.find(',') != std::string::npos) return ',';
  return ' ';
}

std::vector<std::string> split_fields(const std::string& line, char delim) {
  std::vector<std::string> out;
  if (delim == ' ') {
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
  }
  std::string cur;
  for (char c : line) {
    if (c == delim) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_int(const std::string& s, long& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtol(s.c_str(), &end, 10);
  return end && *end == '\0';
}

bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end && *end == '\0' && std::isfinite(out);
}

}  // namespace

void FeatureMatrix::validate() const {
  if (num_rows < 1 || num_features < 1) throw std::invalid_argument("feature matrix must have at least one row and one feature");
  if (static_cast<int>(labels.size()) != num_rows) throw std::invalid_argument("label count does not match row count");
  if (static_cast<int>(alphabets.size()) != num_features) throw std::invalid_argument("alphabet count does not match feature count");
  for (int r = 0; r < num_rows; ++r) {
    for (int c = 0; c < num_features; ++c) {
      const int v = value(r, c);
      if (v < 0 || v >= alphabets[c])
        throw std::invalid_argument("value out of alphabet range at row " + std::to_string(r) + " column " + std::to_string(c));
    }
    if (labels[r] < 0 || labels[r] >= label_alphabet)
      throw std::invalid_argument("label out of range at row " + std::to_string(r));
  }
}

void BinSpec::validate() const {
  if (levels < 2) throw std::invalid_argument("bin spec needs at least 2 levels");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i - 1] < edges[i])) throw std::invalid_argument("bin edges must be strictly increasing");
}

FeatureMatrix load_table(const std::string& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table file: " + path);
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("empty table: " + path);
  const char delim = detect_delimiter(header);
  const std::vector<std::string> names = split_fields(header, delim);
  int label_idx = -1;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == label_column) label_idx = static_cast<int>(i);
  if (label_idx < 0) throw std::runtime_error("label column '" + label_column + "' not found in " + path);
  if (names.size() < 2) throw std::runtime_error("table needs at least one feature column besides the label");

  FeatureMatrix m;
  m.num_features = static_cast<int>(names.size()) - 1;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (static_cast<int>(i) != label_idx) m.feature_names.push_back(names[i]);

  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_fields(line, delim);
    if (cells.size() != names.size())
      throw std::runtime_error("row " + std::to_string(row + 1) + " has " + std::to_string(cells.size()) +
                               " cells, expected " + std::to_string(names.size()));
    for (std::size_t i = 0; i < cells.size(); ++i) {
      long v = 0;
      if (!parse_int(cells[i], v))
        throw std::runtime_error("row " + std::to_string(row + 1) + " column '" + names[i] +
                                 "': non-integer cell '" + cells[i] + "'");
      if (v < 0)
        throw std::runtime_error("row " + std::to_string(row + 1) + " column '" + names[i] + "': negative value");
      if (static_cast<int>(i) == label_idx)
        m.labels.push_back(static_cast<int>(v));
      else
        m.values.push_back(static_cast<int>(v));
    }
    ++row;
  }
  if (row == 0) throw std::runtime_error("table has no data rows: " + path);
  m.num_rows = row;
  m.alphabets.assign(m.num_features, 1);
  for (int r = 0; r < m.num_rows; ++r)
    for (int c = 0; c < m.num_features; ++c) m.alphabets[c] = std::max(m.alphabets[c], m.value(r, c) + 1);
  m.label_alphabet = 1;
  for (int l : m.labels) m.label_alphabet = std::max(m.label_alphabet, l + 1);
  m.validate();
  return m;
}

RealTable load_real_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table file: " + path);
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("empty table: " + path);
  const char delim = detect_delimiter(header);
  RealTable t;
  t.column_names = split_fields(header, delim);
  t.columns.resize(t.column_names.size());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_fields(line, delim);
    if (cells.size() != t.column_names.size())
      throw std::runtime_error("row " + std::to_string(t.num_rows + 1) + " has " + std::to_string(cells.size()) +
                               " cells, expected " + std::to_string(t.column_names.size()));
    for (std::size_t i = 0; i < cells.size(); ++i) {
      double v = 0;
      if (!parse_real(cells[i], v))
        throw std::runtime_error("row " + std::to_string(t.num_rows + 1) + " column '" + t.column_names[i] +
                                 "': non-numeric cell '" + cells[i] + "'");
      t.columns[i].push_back(v);
    }
    ++t.num_rows;
  }
  if (t.num_rows == 0) throw std::runtime_error("table has no data rows: " + path);
  return t;
}

std::pair<std::vector<int>, BinSpec> quantile_discretize(const std::vector<double>& values, int levels) {
  if (levels < 2) throw std::invalid_argument("levels must be at least 2");
  if (values.empty()) throw std::invalid_argument("cannot discretize an empty column");
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<double> edges;
  edges.reserve(levels - 1);
  for (int j = 1; j < levels; ++j) {
    // Linear-interpolation empirical quantile at probability j/levels.
    const double h = (static_cast<double>(j) / levels) * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    const double upper = sorted[std::min(lo + 1, n - 1)];
    edges.push_back(sorted[lo] + frac * (upper - sorted[lo]));
  }
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  BinSpec spec{edges, static_cast<int>(edges.size()) + 1};
  return {apply_bins(values, spec), spec};
}

std::vector<int> apply_bins(const std::vector<double>& values, const BinSpec& spec) {
  spec.validate();
  std::vector<int> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    // Count of edges strictly below the value; out-of-range inputs land in
    // the extreme bins by construction.
    out[i] = static_cast<int>(std::lower_bound(spec.edges.begin(), spec.edges.end(), values[i]) -
                              spec.edges.begin());
  }
  return out;
}

std::pair<FeatureMatrix, std::vector<int>> synthesize_planted(int samples, int features, int informative,
                                                              int alphabet, int classes, double noise,
                                                              std::uint64_t seed) {
  if (samples < 1 || features < 1) throw std::invalid_argument("need at least one sample and feature");
  if (informative < 0 || informative > features) throw std::invalid_argument("informative count out of range");
  if (noise < 0.0 || noise > 1.0) throw std::invalid_argument("noise must be in [0,1]");
  if (classes < 2) throw std::invalid_argument("need at least 2 classes");
  if (alphabet < classes) throw std::invalid_argument("alphabet must be at least the class count so informative columns can be injective in the label");

  Rng rng(seed);
  FeatureMatrix m;
  m.num_rows = samples;
  m.num_features = features;
  m.values.resize(static_cast<std::size_t>(samples) * features);
  m.alphabets.assign(features, alphabet);
  m.label_alphabet = classes;
  m.labels.resize(samples);
  for (int r = 0; r < samples; ++r) m.labels[r] = static_cast<int>(rng.next_below(classes));

  std::vector<int> planted = rng.sample_subset(features, informative);
  std::vector<char> is_planted(features, 0);
  for (int p : planted) is_planted[p] = 1;

  // Each informative column is its own injective relabeling of the classes.
  std::vector<std::vector<int>> codebooks;
  for (int i = 0; i < informative; ++i) codebooks.push_back(rng.sample_subset(alphabet, classes));

  for (int c = 0, planted_pos = 0; c < features; ++c) {
    if (is_planted[c]) {
      const std::vector<int>& code = codebooks[planted_pos++];
      for (int r = 0; r < samples; ++r) {
        int v = code[m.labels[r]];
        if (rng.next_double() < noise) v = static_cast<int>(rng.next_below(alphabet));
        m.values[static_cast<std::size_t>(r) * features + c] = v;
      }
    } else {
      for (int r = 0; r < samples; ++r)
        m.values[static_cast<std::size_t>(r) * features + c] = static_cast<int>(rng.next_below(alphabet));
    }
  }
  for (int c = 0; c < features; ++c) m.feature_names.push_back("f" + std::to_string(c));
  m.validate();
  return {std::move(m), std::move(planted)};
}

FeatureMatrix select_features(const FeatureMatrix& m, const std::vector<int>& columns) {
  if (columns.empty()) throw std::invalid_argument("feature subset must be nonempty");
  FeatureMatrix out;
  out.num_rows = m.num_rows;
  out.num_features = static_cast<int>(columns.size());
  out.labels = m.labels;
  out.label_alphabet = m.label_alphabet;
  out.values.resize(static_cast<std::size_t>(m.num_rows) * columns.size());
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const int c = columns[i];
    if (c < 0 || c >= m.num_features) throw std::invalid_argument("feature index out of range");
    out.alphabets.push_back(m.alphabets[c]);
    out.feature_names.push_back(m.feature_names[c]);
    for (int r = 0; r < m.num_rows; ++r)
      out.values[static_cast<std::size_t>(r) * columns.size() + i] = m.value(r, c);
  }
  out.validate();
  return out;
}

void save_binspecs(std::ostream& out, const std::vector<std::string>& names, const std::vector<BinSpec>& specs) {
  if (names.size() != specs.size()) throw std::invalid_argument("name/spec count mismatch");
  out << "binspec v1\n";
  out << "columns " << specs.size() << "\n";
  for (std::size_t i = 0; i < specs.size(); ++i) {
    out << names[i] << " " << specs[i].levels;
    for (double e : specs[i].edges) out << " " << format_full(e);
    out << "\n";
  }
}

std::pair<std::vector<std::string>, std::vector<BinSpec>> load_binspecs(std::istream& in) {
  std::string magic, version;
  in >> magic >> version;
  if (magic != "binspec" || version != "v1") throw std::runtime_error("not a binspec sidecar");
  std::string key;
  std::size_t count = 0;
  in >> key >> count;
  if (key != "columns") throw std::runtime_error("malformed binspec sidecar");
  std::vector<std::string> names(count);
  std::vector<BinSpec> specs(count);
  for (std::size_t i = 0; i < count; ++i) {
    in >> names[i] >> specs[i].levels;
    if (!in) throw std::runtime_error("truncated binspec sidecar");
    specs[i].edges.resize(specs[i].levels - 1);
    for (double& e : specs[i].edges) in >> e;
    if (!in) throw std::runtime_error("truncated binspec sidecar");
    specs[i].validate();
  }
  return {std::move(names), std::move(specs)};
}

void save_table(std::ostream& out, const FeatureMatrix& m, const std::string& label_name) {
  for (int c = 0; c < m.num_features; ++c) out << m.feature_names[c] << ",";
  out << label_name << "\n";
  for (int r = 0; r < m.num_rows; ++r) {
    for (int c = 0; c < m.num_features; ++c) out << m.value(r, c) << ",";
    out << m.labels[r] << "\n";
  }
}

}  // namespace qfs
