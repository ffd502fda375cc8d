#include "qfs/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <limits>
#include <stdexcept>

#include "qfs/rng.hpp"

namespace qfs {

namespace {

struct RankedTerm {
  const TermKey* key;
  double coeff;
};

// Heaviest first; ties resolve lexicographically so ranking is total.
bool heavier(const RankedTerm& a, const RankedTerm& b) {
  const double wa = std::abs(a.coeff), wb = std::abs(b.coeff);
  if (wa != wb) return wa > wb;
  return *a.key < *b.key;
}

std::vector<RankedTerm> ranked_terms(const SpinHamiltonian& h) {
  std::vector<RankedTerm> out;
  out.reserve(h.terms.size());
  for (const auto& [key, coeff] : h.terms) out.push_back({&key, coeff});
  std::sort(out.begin(), out.end(), heavier);
  return out;
}

SparsifyReport make_report(const SpinHamiltonian& original, const SpinHamiltonian& result,
                           long surrogate_insertions) {
  SparsifyReport rep;
  rep.surrogate_insertions = surrogate_insertions;
  double total = 0.0, retained = 0.0;
  for (const auto& [key, coeff] : original.terms) {
    const int order = static_cast<int>(key.size());
    total += std::abs(coeff);
    if (result.terms.count(key)) {
      rep.kept_dropped_by_order[order].first++;
      retained += std::abs(coeff);  // original mass of every retained term
    } else {
      rep.kept_dropped_by_order[order].second++;
    }
  }
  rep.retained_weight_fraction = total > 0.0 ? retained / total : 1.0;
  return rep;
}

}  // namespace

long SparsifyReport::kept(int order) const {
  auto it = kept_dropped_by_order.find(order);
  return it == kept_dropped_by_order.end() ? 0 : it->second.first;
}

long SparsifyReport::dropped(int order) const {
  auto it = kept_dropped_by_order.find(order);
  return it == kept_dropped_by_order.end() ? 0 : it->second.second;
}

std::pair<SpinHamiltonian, SparsifyReport> truncate_by_weight_count(const SpinHamiltonian& h,
                                                                    std::size_t keep_count) {
  if (keep_count == 0) throw std::invalid_argument("must keep at least one term");
  keep_count = std::min(keep_count, h.terms.size());
  std::vector<RankedTerm> ranked = ranked_terms(h);
  SpinHamiltonian out;
  out.num_vars = h.num_vars;
  out.offset = h.offset;
  for (std::size_t i = 0; i < keep_count; ++i) out.terms.emplace(*ranked[i].key, ranked[i].coeff);
  SparsifyReport rep = make_report(h, out, 0);
  return {std::move(out), std::move(rep)};
}

std::pair<SpinHamiltonian, SparsifyReport> truncate_by_weight(const SpinHamiltonian& h, double keep_fraction) {
  if (!(keep_fraction > 0.0) || keep_fraction > 1.0)
    throw std::invalid_argument("keep fraction must be in (0, 1]");
  const std::size_t keep =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(keep_fraction * h.terms.size())));
  return truncate_by_weight_count(h, keep);
}

std::pair<SpinHamiltonian, SparsifyReport> randomized_tail(const SpinHamiltonian& h, double threshold,
                                                           double surrogate_angle, long budget,
                                                           std::uint64_t seed) {
  if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
  if (budget < 0) throw std::invalid_argument("budget must be nonnegative");

  SpinHamiltonian out;
  out.num_vars = h.num_vars;
  out.offset = h.offset;
  std::vector<const TermKey*> tail_keys;
  std::vector<double> tail_weights;
  for (const auto& [key, coeff] : h.terms) {
    if (std::abs(coeff) >= threshold) {
      out.terms.emplace(key, coeff);
    } else {
      tail_keys.push_back(&key);
      tail_weights.push_back(std::abs(coeff));
    }
  }

  long inserted = 0;
  Rng rng(seed);
  std::vector<char> taken(tail_keys.size(), 0);
  double remaining_mass = 0.0;
  for (double w : tail_weights) remaining_mass += w;
  while (inserted < budget && remaining_mass > 0.0) {
    double u = rng.next_double() * remaining_mass;
    std::size_t pick = tail_keys.size();
    for (std::size_t i = 0; i < tail_keys.size(); ++i) {
      if (taken[i]) continue;
      if (u < tail_weights[i]) {
        pick = i;
        break;
      }
      u -= tail_weights[i];
    }
    if (pick == tail_keys.size()) {  // numerical leftover: take the last free term
      for (std::size_t i = tail_keys.size(); i-- > 0;)
        if (!taken[i]) {
          pick = i;
          break;
        }
      if (pick == tail_keys.size()) break;
    }
    taken[pick] = 1;
    remaining_mass -= tail_weights[pick];
    const double original = h.terms.at(*tail_keys[pick]);
    out.terms.emplace(*tail_keys[pick], original >= 0.0 ? surrogate_angle : -surrogate_angle);
    ++inserted;
  }

  SparsifyReport rep = make_report(h, out, inserted);
  return {std::move(out), std::move(rep)};
}

long heavy_hex_node_count(int rows, int cols) {
  return static_cast<long>(rows + 1) * (4L * cols + 3) + static_cast<long>(rows) * (cols + 1);
}

long heavy_hex_edge_count(int rows, int cols) {
  return static_cast<long>(rows + 1) * (4L * cols + 2) + 2L * rows * (cols + 1);
}

HeavyHexGraph heavy_hex_graph(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("lattice dimensions must be positive");
  HeavyHexGraph g;
  g.rows = rows;
  g.cols = cols;
  const int width = 4 * cols + 3;
  const int rail_nodes = (rows + 1) * width;
  g.num_nodes = rail_nodes;
  auto rail_node = [&](int rail, int x) { return rail * width + x; };

  for (int r = 0; r <= rows; ++r)
    for (int x = 0; x + 1 < width; ++x) g.edges.push_back({rail_node(r, x), rail_node(r, x + 1)});

  // Bridge qubits sit between consecutive rails; the column offset alternates
  // 2, 0, 2, ... so no rail site carries more than one bridge and every rail
  // pair carries cols + 1 bridges.
  for (int r = 0; r < rows; ++r) {
    const int offset = (r % 2 == 0) ? 2 : 0;
    for (int x = offset; x < width; x += 4) {
      const int bridge = g.num_nodes++;
      g.edges.push_back({rail_node(r, x), bridge});
      g.edges.push_back({bridge, rail_node(r + 1, x)});
    }
  }

  g.adjacency.resize(g.num_nodes);
  for (const auto& [u, v] : g.edges) {
    g.adjacency[u].push_back(v);
    g.adjacency[v].push_back(u);
  }
  for (auto& nbrs : g.adjacency) std::sort(nbrs.begin(), nbrs.end());
  return g;
}

bool HeavyHexGraph::connected() const {
  if (num_nodes == 0) return false;
  std::vector<char> seen(num_nodes, 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adjacency[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        queue.push_back(v);
      }
  }
  return reached == num_nodes;
}

int HeavyHexGraph::max_degree() const {
  std::size_t best = 0;
  for (const auto& nbrs : adjacency) best = std::max(best, nbrs.size());
  return static_cast<int>(best);
}

namespace {

std::vector<int> bfs_distances(const HeavyHexGraph& g, int source) {
  std::vector<int> dist(g.num_nodes, -1);
  std::deque<int> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : g.adjacency[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
  }
  return dist;
}

struct DistanceCache {
  const HeavyHexGraph* graph;
  std::map<int, std::vector<int>> by_source;

  const std::vector<int>& from(int source) {
    auto it = by_source.find(source);
    if (it == by_source.end()) it = by_source.emplace(source, bfs_distances(*graph, source)).first;
    return it->second;
  }
};

// Shortest path from u to v choosing the smallest-id predecessor at every
// hop, so routes are deterministic.
std::vector<int> shortest_path(const HeavyHexGraph& g, DistanceCache& cache, int u, int v) {
  const std::vector<int>& dist = cache.from(v);
  std::vector<int> path{u};
  int cur = u;
  while (cur != v) {
    for (int nbr : g.adjacency[cur]) {
      if (dist[nbr] == dist[cur] - 1) {
        cur = nbr;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

// Minimal connecting tree for a placed term: edge count of the best
// single-meeting-node Steiner tree for <=3 terminals; larger supports fall
// back to nearest-terminal growth.
struct SteinerResult {
  int edge_count = 0;
  std::vector<int> nodes;
};

SteinerResult steiner_tree(const HeavyHexGraph& g, DistanceCache& cache, const std::vector<int>& terminals) {
  SteinerResult res;
  if (terminals.size() <= 1) {
    res.nodes = terminals;
    return res;
  }
  if (terminals.size() == 2) {
    std::vector<int> path = shortest_path(g, cache, terminals[0], terminals[1]);
    res.edge_count = static_cast<int>(path.size()) - 1;
    res.nodes = std::move(path);
    return res;
  }
  if (terminals.size() == 3) {
    const std::vector<int>& d0 = cache.from(terminals[0]);
    const std::vector<int>& d1 = cache.from(terminals[1]);
    const std::vector<int>& d2 = cache.from(terminals[2]);
    int best_node = 0;
    long best_sum = std::numeric_limits<long>::max();
    for (int m = 0; m < g.num_nodes; ++m) {
      const long s = static_cast<long>(d0[m]) + d1[m] + d2[m];
      if (s < best_sum) {
        best_sum = s;
        best_node = m;
      }
    }
    res.edge_count = static_cast<int>(best_sum);
    std::vector<int> nodes;
    for (int t : terminals) {
      std::vector<int> path = shortest_path(g, cache, t, best_node);
      nodes.insert(nodes.end(), path.begin(), path.end());
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    res.nodes = std::move(nodes);
    return res;
  }
  // Nearest-terminal growth for higher orders.
  std::vector<int> tree_nodes{terminals[0]};
  int edges = 0;
  std::vector<char> attached(terminals.size(), 0);
  attached[0] = 1;
  for (std::size_t step = 1; step < terminals.size(); ++step) {
    int best_t = -1, best_d = std::numeric_limits<int>::max(), best_anchor = -1;
    for (std::size_t t = 0; t < terminals.size(); ++t) {
      if (attached[t]) continue;
      const std::vector<int>& dist = cache.from(terminals[t]);
      for (int node : tree_nodes)
        if (dist[node] < best_d) {
          best_d = dist[node];
          best_t = static_cast<int>(t);
          best_anchor = node;
        }
    }
    std::vector<int> path = shortest_path(g, cache, best_anchor, terminals[best_t]);
    edges += static_cast<int>(path.size()) - 1;
    tree_nodes.insert(tree_nodes.end(), path.begin(), path.end());
    std::sort(tree_nodes.begin(), tree_nodes.end());
    tree_nodes.erase(std::unique(tree_nodes.begin(), tree_nodes.end()), tree_nodes.end());
    attached[best_t] = 1;
  }
  res.edge_count = edges;
  res.nodes = std::move(tree_nodes);
  return res;
}

}  // namespace

HeavyHexResult map_heavy_hex(const SpinHamiltonian& h, const HeavyHexGraph& graph, int max_swap_cost) {
  if (graph.num_nodes < h.num_vars)
    throw std::invalid_argument("lattice has fewer nodes than program variables");
  if (max_swap_cost < 0) throw std::invalid_argument("swap budget must be nonnegative");

  DistanceCache cache{&graph, {}};
  std::vector<int> placement(h.num_vars, -1);
  std::vector<char> node_used(graph.num_nodes, 0);

  auto place = [&](int var, int node) {
    placement[var] = node;
    node_used[node] = 1;
  };

  // Free node closest to any anchor; ties and the no-anchor case scan node
  // ids in order.
  auto nearest_free = [&](const std::vector<int>& anchors) {
    int best = -1, best_d = std::numeric_limits<int>::max();
    if (anchors.empty()) {
      for (int n = 0; n < graph.num_nodes; ++n)
        if (!node_used[n]) return n;
      return -1;
    }
    for (int n = 0; n < graph.num_nodes; ++n) {
      if (node_used[n]) continue;
      int d = std::numeric_limits<int>::max();
      for (int a : anchors) d = std::min(d, cache.from(a)[n]);
      if (d < best_d) {
        best_d = d;
        best = n;
      }
    }
    return best;
  };

  // Heaviest third-order terms are placed first, each on a free 3-chain when
  // one exists; already-placed members stay put.
  std::vector<RankedTerm> ranked = ranked_terms(h);
  for (const RankedTerm& term : ranked) {
    if (term.key->size() != 3) continue;
    std::vector<int> unplaced;
    std::vector<int> anchors;
    for (int v : *term.key) {
      if (placement[v] < 0)
        unplaced.push_back(v);
      else
        anchors.push_back(placement[v]);
    }
    if (unplaced.empty()) continue;
    if (anchors.empty() && unplaced.size() == 3) {
      bool chained = false;
      for (int a = 0; a < graph.num_nodes && !chained; ++a) {
        if (node_used[a]) continue;
        for (int b : graph.adjacency[a]) {
          if (node_used[b]) continue;
          for (int c : graph.adjacency[b]) {
            if (c == a || node_used[c]) continue;
            place(unplaced[0], a);
            place(unplaced[1], b);
            place(unplaced[2], c);
            chained = true;
            break;
          }
          if (chained) break;
        }
      }
      if (chained) continue;
    }
    for (int v : unplaced) {
      const int node = nearest_free(anchors);
      if (node < 0) throw std::runtime_error("lattice ran out of free nodes");
      place(v, node);
      anchors.push_back(node);
    }
  }
  // Variables untouched by any third-order term.
  for (int v = 0; v < h.num_vars; ++v) {
    if (placement[v] >= 0) continue;
    // Prefer sitting near the heaviest already-placed partner.
    std::vector<int> anchors;
    double best_weight = -1.0;
    for (const auto& [key, coeff] : h.terms) {
      if (std::find(key.begin(), key.end(), v) == key.end()) continue;
      for (int other : key) {
        if (other == v || placement[other] < 0) continue;
        if (std::abs(coeff) > best_weight) {
          best_weight = std::abs(coeff);
          anchors.assign(1, placement[other]);
        }
      }
    }
    const int node = nearest_free(anchors);
    if (node < 0) throw std::runtime_error("lattice ran out of free nodes");
    place(v, node);
  }

  HeavyHexResult result;
  result.layout.placement = placement;
  result.retained.num_vars = h.num_vars;
  result.retained.offset = h.offset;

  for (const auto& [key, coeff] : h.terms) {
    std::vector<int> terminals;
    for (int v : key) terminals.push_back(placement[v]);
    const SteinerResult tree = steiner_tree(graph, cache, terminals);
    const int cost = tree.edge_count - (static_cast<int>(key.size()) - 1);
    result.layout.term_costs[key] = cost;
    result.layout.term_nodes[key] = tree.nodes;
    // All single-qubit terms stay; larger terms must fit the routing budget.
    if (key.size() == 1 || cost <= max_swap_cost) result.retained.terms.emplace(key, coeff);
  }
  result.report = make_report(h, result.retained, 0);
  result.layout.depth_estimate = estimate_depth(result.layout, result.retained);
  return result;
}

long estimate_depth(const Layout& layout, const SpinHamiltonian& retained) {
  std::vector<RankedTerm> ranked = ranked_terms(retained);
  std::map<int, long> node_free_at;
  long depth = 0;
  for (const RankedTerm& term : ranked) {
    const std::size_t w = term.key->size();
    if (w < 2) continue;  // single-qubit rotations are absorbed
    const auto cost_it = layout.term_costs.find(*term.key);
    const int swaps = cost_it == layout.term_costs.end() ? 0 : std::max(0, cost_it->second);
    const long duration = 2 * (static_cast<long>(w) - 1) + 1 + 2L * swaps;
    const auto nodes_it = layout.term_nodes.find(*term.key);
    std::vector<int> nodes;
    if (nodes_it != layout.term_nodes.end()) {
      nodes = nodes_it->second;
    } else {
      for (int v : *term.key) nodes.push_back(layout.placement[v]);
    }
    long start = 0;
    for (int n : nodes) {
      auto it = node_free_at.find(n);
      if (it != node_free_at.end()) start = std::max(start, it->second);
    }
    for (int n : nodes) node_free_at[n] = start + duration;
    depth = std::max(depth, start + duration);
  }
  return depth;
}

void write_layout(std::ostream& out, const Layout& layout) {
  out << "placement " << layout.placement.size() << "\n";
  for (std::size_t v = 0; v < layout.placement.size(); ++v)
    out << v << " " << layout.placement[v] << "\n";
  out << "term_costs " << layout.term_costs.size() << "\n";
  for (const auto& [key, cost] : layout.term_costs) {
    for (std::size_t i = 0; i < key.size(); ++i) out << (i ? "," : "") << key[i];
    out << " " << cost << "\n";
  }
  out << "depth_estimate " << layout.depth_estimate << "\n";
}

void write_sparsify_report(std::ostream& out, const SparsifyReport& report) {
  out << "retained_weight_fraction " << report.retained_weight_fraction << "\n";
  out << "surrogate_insertions " << report.surrogate_insertions << "\n";
  for (const auto& [order, counts] : report.kept_dropped_by_order)
    out << "order " << order << " kept " << counts.first << " dropped " << counts.second << "\n";
}

}  // namespace qfs
