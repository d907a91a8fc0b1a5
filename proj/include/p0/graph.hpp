#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace p0 {

/// Out-degrees d_i and in-degrees b_j of a directed graph (the bi-degree
/// sequence). Both sum to the edge count.
struct BiDegree {
  std::vector<int> out_deg;
  std::vector<int> in_deg;
};

/// Simple directed graph on nodes 0..n-1 with a dense binary adjacency
/// matrix and no self-loops. Immutable once built; safe to share across
/// concurrent readers.
class DirectedGraph {
 public:
  explicit DirectedGraph(int n);

  int node_count() const { return n_; }
  int edge_count() const { return edges_; }

  bool has_edge(int i, int j) const { return adj_[static_cast<std::size_t>(i) * n_ + j] != 0; }

  /// Inserts edge i -> j. Rejects self-loops and out-of-range nodes;
  /// inserting an existing edge is a no-op (edges are binary).
  void add_edge(int i, int j);

  const BiDegree& bi_degree() const { return degrees_; }

  /// Edge count divided by n(n-1). Requires n >= 2.
  double density() const;

  /// Graph with every edge reversed; out- and in-degrees swap.
  DirectedGraph transpose() const;

  const std::vector<std::uint8_t>& adjacency() const { return adj_; }

 private:
  int n_ = 0;
  int edges_ = 0;
  std::vector<std::uint8_t> adj_;
  BiDegree degrees_;
};

struct EdgeListOptions {
  bool weighted = false;    // third column is a weight; keep edges with weight >= threshold
  double threshold = 1.0;
  bool relabel = true;      // map ids to 1..n preserving their sort order
};

/// Parses "src dst" or "src dst weight" lines (whitespace- or
/// comma-separated; '#' and '%' start comments). Self-loops are dropped and
/// duplicate edges collapse to one. With relabel, ids may be arbitrary
/// integers or strings and are mapped to 0..n-1 in sorted order (numeric
/// order when every id parses as an integer, lexicographic otherwise);
/// without it, ids must already be integers 1..n.
DirectedGraph from_edge_list(std::istream& in, const EdgeListOptions& opts = {});

/// Canonical form: one "src dst" pair per line, 1-based ids, sorted by
/// (src, dst). Re-parsing the output reproduces the graph.
void to_canonical_edge_list(const DirectedGraph& g, std::ostream& out);

}  // namespace p0
