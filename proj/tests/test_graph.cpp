#include <doctest.h>

#include <sstream>

#include "p0/errors.hpp"
#include "p0/graph.hpp"

using namespace p0;

namespace {

DirectedGraph parse(const std::string& text, EdgeListOptions opts = {}) {
  std::istringstream in(text);
  return from_edge_list(in, opts);
}

DirectedGraph three_cycle() {
  DirectedGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  return g;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("edge list: basic parse") {
  DirectedGraph g = parse("1 2\n2 3\n3 1");
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 3);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 2));
  CHECK(g.has_edge(2, 0));
  CHECK_FALSE(g.has_edge(1, 0));
  CHECK(g.bi_degree().out_deg == std::vector<int>{1, 1, 1});
  CHECK(g.bi_degree().in_deg == std::vector<int>{1, 1, 1});
}

TEST_CASE("edge list: weighted threshold keeps only heavy edges") {
  EdgeListOptions opts;
  opts.weighted = true;
  opts.threshold = 1.0;
  DirectedGraph g = parse("1 2 5\n2 1 0", opts);
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.has_edge(0, 1));
  CHECK_FALSE(g.has_edge(1, 0));
}

TEST_CASE("edge list: self-loop dropped, node kept") {
  DirectedGraph g = parse("1 1\n1 2");
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.has_edge(0, 1));
}

TEST_CASE("edge list: duplicates collapse, comments and commas accepted") {
  DirectedGraph g = parse("# comment\n% other comment\n1,2\n1 2\n\n2,1,3.5\n");
  CHECK(g.edge_count() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
}

TEST_CASE("edge list: numeric ids sort numerically under relabel") {
  // 10 > 9 numerically though "10" < "9" lexicographically
  DirectedGraph g = parse("9 10\n2 9");
  CHECK(g.node_count() == 3);
  CHECK(g.has_edge(1, 2));  // 9 -> 10
  CHECK(g.has_edge(0, 1));  // 2 -> 9
}

TEST_CASE("edge list: string ids sort lexicographically") {
  DirectedGraph g = parse("banana apple\napple cherry");
  CHECK(g.node_count() == 3);
  CHECK(g.has_edge(1, 0));  // banana -> apple
  CHECK(g.has_edge(0, 2));  // apple -> cherry
}

TEST_CASE("edge list: malformed lines carry line numbers") {
  CHECK_THROWS_AS(parse("1 2\n3\n"), ParseError);
  try {
    parse("1 2\n3\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse("1 2 heavy\n"), ParseError);
  CHECK_THROWS_AS(parse("1 2 3 4\n"), ParseError);
}

TEST_CASE("edge list: empty input") {
  CHECK_THROWS_AS(parse(""), EmptyInputError);
  CHECK_THROWS_AS(parse("# only comments\n"), EmptyInputError);
}

TEST_CASE("edge list: relabel off requires positive integer ids") {
  EdgeListOptions opts;
  opts.relabel = false;
  DirectedGraph g = parse("1 5\n", opts);
  CHECK(g.node_count() == 5);
  CHECK(g.has_edge(0, 4));
  CHECK_THROWS_AS(parse("0 1\n", opts), ParseError);
  CHECK_THROWS_AS(parse("a b\n", opts), ParseError);
}

TEST_CASE("bi-degree: directed star and empty graph") {
  DirectedGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  CHECK(g.bi_degree().out_deg == std::vector<int>{2, 0, 0});
  CHECK(g.bi_degree().in_deg == std::vector<int>{0, 1, 1});

  DirectedGraph empty(4);
  CHECK(empty.bi_degree().out_deg == std::vector<int>{0, 0, 0, 0});
  CHECK(empty.bi_degree().in_deg == std::vector<int>{0, 0, 0, 0});
}

TEST_CASE("transpose reverses edges and swaps degrees") {
  DirectedGraph g = three_cycle();
  DirectedGraph t = g.transpose();
  CHECK(t.has_edge(1, 0));
  CHECK(t.has_edge(2, 1));
  CHECK(t.has_edge(0, 2));
  CHECK_FALSE(t.has_edge(0, 1));

  DirectedGraph single(2);
  single.add_edge(0, 1);
  CHECK(single.transpose().has_edge(1, 0));
  CHECK(DirectedGraph(3).transpose().edge_count() == 0);
}

TEST_CASE("density") {
  CHECK(three_cycle().density() == doctest::Approx(0.5));
  CHECK(DirectedGraph(5).density() == 0.0);
  DirectedGraph full(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) full.add_edge(i, j);
  CHECK(full.density() == 1.0);
  CHECK_THROWS_AS(DirectedGraph(1).density(), std::invalid_argument);
}

TEST_CASE("self-loops and bad endpoints rejected by the builder") {
  DirectedGraph g(3);
  CHECK_THROWS_AS(g.add_edge(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(0, 3), std::invalid_argument);
}

TEST_CASE("property: handshake identity and transpose involution") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    DirectedGraph g(7);
    std::uint64_t bits = seed * 0x9E3779B97F4A7C15ULL + 12345;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) {
        if (i == j) continue;
        bits = bits * 6364136223846793005ULL + 1442695040888963407ULL;
        if ((bits >> 40) & 1) g.add_edge(i, j);
      }
    long long sum_out = 0, sum_in = 0;
    for (int v : g.bi_degree().out_deg) sum_out += v;
    for (int v : g.bi_degree().in_deg) sum_in += v;
    CHECK(sum_out == sum_in);
    CHECK(sum_out == g.edge_count());

    CHECK(g.transpose().transpose().adjacency() == g.adjacency());
  }
}

TEST_CASE("canonical export round-trips") {
  DirectedGraph g = parse("5 3\n3 5\n1 5\n3 1\n");
  std::ostringstream out;
  to_canonical_edge_list(g, out);
  CHECK(out.str() == "1 3\n2 1\n2 3\n3 2\n");  // ids 1,3,5 relabel to 1,2,3

  DirectedGraph again = parse(out.str());
  CHECK(again.adjacency() == g.adjacency());

  std::ostringstream out2;
  to_canonical_edge_list(again, out2);
  CHECK(out2.str() == out.str());
}

}  // TEST_SUITE
