#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "qfs/pcbo.hpp"

namespace qfs {

struct SparsifyReport {
  std::map<int, std::pair<long, long>> kept_dropped_by_order;  // order -> (kept, dropped)
  double retained_weight_fraction = 1.0;  // share of the original absolute term mass retained
  long surrogate_insertions = 0;

  long kept(int order) const;
  long dropped(int order) const;
};

// Keep the top fraction/count of terms by absolute coefficient; ties resolve
// to the lexicographically smaller tuple. The offset passes through.
std::pair<SpinHamiltonian, SparsifyReport> truncate_by_weight(const SpinHamiltonian& h, double keep_fraction);
std::pair<SpinHamiltonian, SparsifyReport> truncate_by_weight_count(const SpinHamiltonian& h, std::size_t keep_count);

// Terms at or above the threshold survive verbatim; up to `budget` tail terms
// are drawn without replacement with probability proportional to weight and
// re-weighted to the signed surrogate angle. The rest of the tail is dropped.
std::pair<SpinHamiltonian, SparsifyReport> randomized_tail(const SpinHamiltonian& h, double threshold,
                                                           double surrogate_angle, long budget,
                                                           std::uint64_t seed);

// Degree-<=3 coupling lattice: rows+1 full-width qubit rails of 4*cols+1
// sites each, joined by bridge qubits every 4 columns with the bridge offset
// alternating between 0 and 2 on consecutive rail pairs.
struct HeavyHexGraph {
  int rows = 0;
  int cols = 0;
  int num_nodes = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> adjacency;

  bool connected() const;
  int max_degree() const;
};

HeavyHexGraph heavy_hex_graph(int rows, int cols);

// Closed-form node/edge counts for the tiling above.
long heavy_hex_node_count(int rows, int cols);
long heavy_hex_edge_count(int rows, int cols);

struct Layout {
  std::vector<int> placement;          // program variable -> physical node
  std::map<TermKey, int> term_costs;   // routing cost per term (SWAP count)
  std::map<TermKey, std::vector<int>> term_nodes;  // physical nodes a term occupies
  long depth_estimate = 0;
};

struct HeavyHexResult {
  Layout layout;
  SpinHamiltonian retained;
  SparsifyReport report;
};

// Greedy heaviest-triplet-first placement; placement is independent of the
// budget, so retained sets grow monotonically with max_swap_cost.
HeavyHexResult map_heavy_hex(const SpinHamiltonian& h, const HeavyHexGraph& graph, int max_swap_cost);

// Greedy schedule over physical nodes: a weight-w term occupies its nodes for
// 2(w-1) + 1 + 2*swaps layers; disjoint terms share layers. Order-1 terms are
// single-qubit rotations and add no two-qubit depth.
long estimate_depth(const Layout& layout, const SpinHamiltonian& retained);

void write_layout(std::ostream& out, const Layout& layout);
void write_sparsify_report(std::ostream& out, const SparsifyReport& report);

}  // namespace qfs
