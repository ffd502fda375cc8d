#include "qfs/pcbo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qfs/infotheory.hpp"

namespace qfs {

namespace {

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_key(const TermKey& key, int num_vars) {
  if (key.empty()) throw std::invalid_argument("term key must be nonempty");
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (key[i] < 0 || key[i] >= num_vars) throw std::invalid_argument("term index out of range");
    if (i > 0 && key[i] <= key[i - 1]) throw std::invalid_argument("term key must be strictly increasing");
  }
}

void accumulate(TermMap& terms, TermKey key, double coeff) {
  auto it = terms.find(key);
  if (it == terms.end()) {
    terms.emplace(std::move(key), coeff);
  } else {
    it->second += coeff;
  }
}

void drop_negligible(TermMap& terms) {
  for (auto it = terms.begin(); it != terms.end();) {
    if (std::abs(it->second) < kCoefficientEpsilon)
      it = terms.erase(it);
    else
      ++it;
  }
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

void PolyBinaryProblem::add_term(TermKey key, double coeff) {
  check_key(key, num_vars);
  accumulate(terms, std::move(key), coeff);
}

void PolyBinaryProblem::canonicalize() { drop_negligible(terms); }

int PolyBinaryProblem::max_order() const {
  std::size_t order = 0;
  for (const auto& [key, c] : terms) order = std::max(order, key.size());
  return static_cast<int>(order);
}

void SpinHamiltonian::add_term(TermKey key, double coeff) {
  check_key(key, num_vars);
  accumulate(terms, std::move(key), coeff);
}

void SpinHamiltonian::canonicalize() { drop_negligible(terms); }

int SpinHamiltonian::max_order() const {
  std::size_t order = 0;
  for (const auto& [key, c] : terms) order = std::max(order, key.size());
  return static_cast<int>(order);
}

double SpinHamiltonian::total_abs_weight() const {
  double w = 0.0;
  for (const auto& [key, c] : terms) w += std::abs(c);
  return w;
}

void AlphaWeights::validate() const {
  if (std::abs(a1 + a2 + a3 - 1.0) > 1e-12) throw std::invalid_argument("alpha weights must sum to 1");
}

namespace {

// Pairwise score helpers. Ordered-pair sums collapse onto the sorted tuple:
// the (i,j) and (j,i) contributions accumulate, diagonals are excluded.
double relevance(const FeatureMatrix& m, int i) {
  const int y = m.num_features;
  return mutual_information(m, std::span<const int>(&i, 1), std::span<const int>(&y, 1));
}

double redundancy(const FeatureMatrix& m, int i, int j) {
  return mutual_information(m, std::span<const int>(&i, 1), std::span<const int>(&j, 1));
}

double conditional_relevance(const FeatureMatrix& m, int i, int j) {
  const int y = m.num_features;
  return conditional_mutual_information(m, std::span<const int>(&i, 1), std::span<const int>(&y, 1),
                                        std::span<const int>(&j, 1));
}

}  // namespace

PolyBinaryProblem build_mrmr(const FeatureMatrix& m, double lambda) {
  m.validate();
  PolyBinaryProblem p;
  p.num_vars = m.num_features;
  for (int i = 0; i < p.num_vars; ++i) p.add_term({i}, -lambda * relevance(m, i));
  for (int i = 0; i < p.num_vars; ++i)
    for (int j = i + 1; j < p.num_vars; ++j) p.add_term({i, j}, 2.0 * redundancy(m, i, j));
  p.canonicalize();
  return p;
}

PolyBinaryProblem build_miqubo(const FeatureMatrix& m, double lambda) {
  m.validate();
  PolyBinaryProblem p;
  p.num_vars = m.num_features;
  for (int i = 0; i < p.num_vars; ++i) p.add_term({i}, -lambda * relevance(m, i));
  for (int i = 0; i < p.num_vars; ++i)
    for (int j = i + 1; j < p.num_vars; ++j)
      p.add_term({i, j}, -(conditional_relevance(m, i, j) + conditional_relevance(m, j, i)));
  p.canonicalize();
  return p;
}

PolyBinaryProblem build_full_qubo(const FeatureMatrix& m, double lambda) {
  m.validate();
  PolyBinaryProblem p;
  p.num_vars = m.num_features;
  for (int i = 0; i < p.num_vars; ++i) p.add_term({i}, -lambda * relevance(m, i));
  for (int i = 0; i < p.num_vars; ++i)
    for (int j = i + 1; j < p.num_vars; ++j)
      p.add_term({i, j}, 2.0 * redundancy(m, i, j) -
                             (conditional_relevance(m, i, j) + conditional_relevance(m, j, i)));
  p.canonicalize();
  return p;
}

PolyBinaryProblem build_entropy_cubo(const FeatureMatrix& m, const AlphaWeights& alpha, int k) {
  m.validate();
  alpha.validate();
  const int f = m.num_features;
  if (k < 1 || k > f) throw std::invalid_argument("selection size k out of range");
  if (alpha.a2 != 0.0 && k < 2) throw std::invalid_argument("k must be at least 2 when second-order weight is nonzero");
  if (alpha.a3 != 0.0 && k < 3) throw std::invalid_argument("k must be at least 3 when third-order weight is nonzero");

  const int y = f;
  auto label_information = [&](std::span<const int> subset) {
    // H(S) - H(S|y) = I(S; y), nonnegative.
    return entropy(m, subset) - conditional_entropy(m, subset, std::span<const int>(&y, 1));
  };

  PolyBinaryProblem p;
  p.num_vars = f;
  p.cardinality = k;
  if (alpha.a1 != 0.0) {
    const double norm = alpha.a1 / static_cast<double>(k);
    for (int i = 0; i < f; ++i) {
      const int cols[1] = {i};
      p.add_term({i}, -norm * label_information(cols));
    }
  }
  if (alpha.a2 != 0.0) {
    const double norm = alpha.a2 / binomial(k, 2);
    for (int i = 0; i < f; ++i)
      for (int j = i + 1; j < f; ++j) {
        const int cols[2] = {i, j};
        p.add_term({i, j}, -norm * label_information(cols));
      }
  }
  if (alpha.a3 != 0.0) {
    const double norm = alpha.a3 / binomial(k, 3);
    for (int i = 0; i < f; ++i)
      for (int j = i + 1; j < f; ++j)
        for (int l = j + 1; l < f; ++l) {
          const int cols[3] = {i, j, l};
          p.add_term({i, j, l}, -norm * label_information(cols));
        }
  }
  p.canonicalize();
  return p;
}

PolyBinaryProblem apply_cardinality_penalty(const PolyBinaryProblem& p, double lambda_c) {
  if (!p.cardinality) throw std::invalid_argument("problem has no cardinality target to absorb");
  if (!(lambda_c > 0.0)) throw std::invalid_argument("penalty multiplier must be positive");
  const int n = *p.cardinality;
  PolyBinaryProblem out = p;
  out.cardinality.reset();
  // (sum x_i - n)^2 with x^2 = x: n^2 + (1-2n) sum x_i + 2 sum_{i<j} x_i x_j.
  out.constant += lambda_c * static_cast<double>(n) * n;
  for (int i = 0; i < p.num_vars; ++i) out.add_term({i}, lambda_c * (1.0 - 2.0 * n));
  for (int i = 0; i < p.num_vars; ++i)
    for (int j = i + 1; j < p.num_vars; ++j) out.add_term({i, j}, 2.0 * lambda_c);
  out.canonicalize();
  return out;
}

SpinHamiltonian to_spin(const PolyBinaryProblem& p) {
  if (p.cardinality) throw std::invalid_argument("absorb the cardinality constraint before converting to spins");
  SpinHamiltonian h;
  h.num_vars = p.num_vars;
  h.offset = p.constant;
  for (const auto& [key, coeff] : p.terms) {
    // prod_i (1 - Z_i)/2 = 2^-w sum_{S subset} (-1)^|S| Z_S.
    const std::size_t w = key.size();
    const double scale = coeff / static_cast<double>(1ULL << w);
    for (std::size_t mask = 0; mask < (1ULL << w); ++mask) {
      TermKey sub;
      for (std::size_t b = 0; b < w; ++b)
        if (mask & (1ULL << b)) sub.push_back(key[b]);
      const double signed_coeff = (sub.size() % 2 == 0) ? scale : -scale;
      if (sub.empty())
        h.offset += signed_coeff;
      else
        h.add_term(std::move(sub), signed_coeff);
    }
  }
  h.canonicalize();
  return h;
}

double evaluate_binary(const PolyBinaryProblem& p, std::span<const int> bits) {
  if (static_cast<int>(bits.size()) != p.num_vars) throw std::invalid_argument("bit vector length mismatch");
  for (int b : bits)
    if (b != 0 && b != 1) throw std::invalid_argument("bits must be 0 or 1");
  double e = p.constant;
  for (const auto& [key, coeff] : p.terms) {
    int prod = 1;
    for (int i : key) prod &= bits[i];
    if (prod) e += coeff;
  }
  return e;
}

double evaluate_spin(const SpinHamiltonian& h, std::span<const int> spins) {
  if (static_cast<int>(spins.size()) != h.num_vars) throw std::invalid_argument("spin vector length mismatch");
  for (int s : spins)
    if (s != 1 && s != -1) throw std::invalid_argument("spins must be +1 or -1");
  double e = h.offset;
  for (const auto& [key, coeff] : h.terms) {
    int prod = 1;
    for (int i : key) prod *= spins[i];
    e += coeff * prod;
  }
  return e;
}

void save_terms(std::ostream& out, int num_vars, const TermMap& terms, double offset,
                std::optional<int> cardinality) {
  out << "vars " << num_vars << " offset " << format_full(offset) << "\n";
  if (cardinality) out << "cardinality " << *cardinality << "\n";
  for (const auto& [key, coeff] : terms) {
    for (std::size_t i = 0; i < key.size(); ++i) out << (i ? "," : "") << key[i];
    out << " " << format_full(coeff) << "\n";
  }
}

void save_problem(std::ostream& out, const PolyBinaryProblem& p) {
  save_terms(out, p.num_vars, p.terms, p.constant, p.cardinality);
}

void save_hamiltonian(std::ostream& out, const SpinHamiltonian& h) {
  save_terms(out, h.num_vars, h.terms, h.offset, std::nullopt);
}

namespace {

struct ParsedTerms {
  int num_vars = 0;
  TermMap terms;
  double offset = 0.0;
  std::optional<int> cardinality;
};

ParsedTerms parse_terms(std::istream& in) {
  ParsedTerms out;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty problem stream");
  {
    std::istringstream head(line);
    std::string vars_key, offset_key;
    head >> vars_key >> out.num_vars >> offset_key >> out.offset;
    if (!head || vars_key != "vars" || offset_key != "offset")
      throw std::runtime_error("malformed problem header: " + line);
  }
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    if (line.rfind("cardinality", 0) == 0) {
      std::istringstream ss(line);
      std::string key;
      int k = 0;
      ss >> key >> k;
      if (!ss) throw std::runtime_error("malformed cardinality line: " + line);
      out.cardinality = k;
      continue;
    }
    std::istringstream ss(line);
    std::string indices;
    double coeff = 0.0;
    ss >> indices >> coeff;
    if (!ss) throw std::runtime_error("malformed term line: " + line);
    TermKey key;
    std::istringstream is(indices);
    std::string tok;
    while (std::getline(is, tok, ',')) key.push_back(std::stoi(tok));
    if (key.empty()) throw std::runtime_error("malformed term line: " + line);
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (key[i] < 0 || key[i] >= out.num_vars) throw std::runtime_error("term index out of range: " + line);
      if (i > 0 && key[i] <= key[i - 1]) throw std::runtime_error("term indices must be strictly increasing: " + line);
    }
    if (out.terms.count(key)) throw std::runtime_error("duplicate term: " + line);
    out.terms.emplace(std::move(key), coeff);
  }
  return out;
}

}  // namespace

PolyBinaryProblem load_problem(std::istream& in) {
  ParsedTerms t = parse_terms(in);
  PolyBinaryProblem p;
  p.num_vars = t.num_vars;
  p.terms = std::move(t.terms);
  p.constant = t.offset;
  p.cardinality = t.cardinality;
  p.canonicalize();
  return p;
}

SpinHamiltonian load_hamiltonian(std::istream& in) {
  ParsedTerms t = parse_terms(in);
  if (t.cardinality) throw std::runtime_error("spin operator stream carries a cardinality line");
  SpinHamiltonian h;
  h.num_vars = t.num_vars;
  h.terms = std::move(t.terms);
  h.offset = t.offset;
  h.canonicalize();
  return h;
}

PolyBinaryProblem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file: " + path);
  return load_problem(in);
}

}  // namespace qfs
