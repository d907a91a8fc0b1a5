#include "p0/graph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "p0/errors.hpp"

namespace p0 {

DirectedGraph::DirectedGraph(int n) : n_(n) {
  if (n < 0) throw std::invalid_argument("node count must be non-negative");
  adj_.assign(static_cast<std::size_t>(n) * n, 0);
  degrees_.out_deg.assign(n, 0);
  degrees_.in_deg.assign(n, 0);
}

void DirectedGraph::add_edge(int i, int j) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_)
    throw std::invalid_argument("edge endpoint out of range");
  if (i == j) throw std::invalid_argument("self-loops are not allowed");
  std::uint8_t& cell = adj_[static_cast<std::size_t>(i) * n_ + j];
  if (cell) return;
  cell = 1;
  ++edges_;
  ++degrees_.out_deg[i];
  ++degrees_.in_deg[j];
}

double DirectedGraph::density() const {
  if (n_ < 2) throw std::invalid_argument("density requires at least 2 nodes");
  return static_cast<double>(edges_) / (static_cast<double>(n_) * (n_ - 1));
}

DirectedGraph DirectedGraph::transpose() const {
  DirectedGraph t(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (has_edge(i, j)) t.add_edge(j, i);
  return t;
}

namespace {

struct RawEdge {
  std::string src, dst;
  bool keep;  // passed the weight threshold (or unweighted)
};

bool parse_integer(const std::string& s, long long& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

DirectedGraph from_edge_list(std::istream& in, const EdgeListOptions& opts) {
  std::vector<RawEdge> edges;
  std::vector<std::string> ids;

  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::string src, dst, rest;
    if (!(ls >> src)) continue;                      // blank line
    if (src[0] == '#' || src[0] == '%') continue;    // comment
    if (!(ls >> dst)) throw ParseError("expected 'src dst' or 'src dst weight'", line_no);

    double weight = 1.0;
    bool have_weight = false;
    if (ls >> rest) {
      try {
        std::size_t pos = 0;
        weight = std::stod(rest, &pos);
        if (pos != rest.size()) throw std::invalid_argument(rest);
      } catch (const std::exception&) {
        throw ParseError("weight '" + rest + "' is not a number", line_no);
      }
      have_weight = true;
      std::string extra;
      if (ls >> extra) throw ParseError("unexpected trailing field '" + extra + "'", line_no);
    }
    (void)have_weight;

    bool keep = !opts.weighted || weight >= opts.threshold;
    edges.push_back({src, dst, keep});
    ids.push_back(src);
    ids.push_back(dst);
  }

  if (ids.empty()) throw EmptyInputError("edge list contains no nodes");

  // Node index assignment. With relabel, sort the distinct ids (numerically
  // when they all parse as integers) so that "the r largest ids" always map
  // to the last r indices. Without relabel, ids must already be 1..n.
  std::map<std::string, int> index;
  int n = 0;
  if (opts.relabel) {
    std::vector<std::string> uniq = ids;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

    bool all_numeric = true;
    std::vector<std::pair<long long, std::string>> numeric;
    numeric.reserve(uniq.size());
    for (const auto& s : uniq) {
      long long v;
      if (!parse_integer(s, v)) {
        all_numeric = false;
        break;
      }
      numeric.emplace_back(v, s);
    }
    if (all_numeric) {
      std::sort(numeric.begin(), numeric.end());
      for (const auto& [v, s] : numeric) index[s] = n++;
    } else {
      for (const auto& s : uniq) index[s] = n++;
    }
  } else {
    long long max_id = 0;
    for (const auto& s : ids) {
      long long v;
      if (!parse_integer(s, v) || v < 1)
        throw ParseError("id '" + s + "' is not a positive integer; use relabel for arbitrary ids", 0);
      max_id = std::max(max_id, v);
    }
    if (max_id > 100000) throw ParseError("largest id exceeds the dense-storage limit; use relabel", 0);
    n = static_cast<int>(max_id);
    for (const auto& s : ids) {
      long long v;
      parse_integer(s, v);
      index[s] = static_cast<int>(v) - 1;
    }
  }

  DirectedGraph g(n);
  for (const auto& e : edges) {
    if (!e.keep) continue;
    int i = index[e.src];
    int j = index[e.dst];
    if (i == j) continue;  // self-loops dropped silently
    g.add_edge(i, j);
  }
  return g;
}

void to_canonical_edge_list(const DirectedGraph& g, std::ostream& out) {
  const int n = g.node_count();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (g.has_edge(i, j)) out << (i + 1) << ' ' << (j + 1) << '\n';
}

}  // namespace p0
