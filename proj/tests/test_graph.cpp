#include <doctest.h>

#include <sstream>

#include "circlefeat/graph.hpp"
#include "test_util.hpp"

using namespace circlefeat;

TEST_CASE("build_graph constructs sorted symmetric adjacency") {
  std::vector<Edge> edges{{0, 1}, {1, 2}};
  Graph g = build_graph(edges, 3);
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 2);
  auto nbrs = g.neighbors(1);
  REQUIRE(nbrs.size() == 2);
  CHECK(nbrs[0] == 0);
  CHECK(nbrs[1] == 2);
  CHECK(testutil::graph_is_valid(g));
}

TEST_CASE("build_graph deduplicates and symmetrizes") {
  std::vector<Edge> edges{{0, 1}, {1, 0}, {0, 1}};
  Graph g = build_graph(edges, 2);
  CHECK(g.num_edges() == 1);
}

TEST_CASE("build_graph drops self-loops") {
  std::vector<Edge> edges{{0, 0}, {0, 1}};
  Graph g = build_graph(edges, 2);
  CHECK(g.num_edges() == 1);
  CHECK_FALSE(g.has_edge(0, 0));
}

TEST_CASE("build_graph rejects out-of-range ids") {
  std::vector<Edge> edges{{0, 3}};
  CHECK_THROWS_AS(build_graph(edges, 3), std::out_of_range);
}

TEST_CASE("neighbors of boundary cases") {
  Graph path = make_path(3);
  auto mid = path.neighbors(1);
  REQUIRE(mid.size() == 2);
  CHECK(mid[0] == 0);
  CHECK(mid[1] == 2);

  Graph isolated = build_graph({}, 2);
  CHECK(isolated.neighbors(0).empty());

  Graph k4 = make_complete(4);
  auto n0 = k4.neighbors(0);
  REQUIRE(n0.size() == 3);
  CHECK(n0[0] == 1);
  CHECK(n0[2] == 3);

  CHECK_THROWS_AS(path.neighbors(3), std::out_of_range);
  CHECK_THROWS_AS(path.neighbors(-1), std::out_of_range);
}

TEST_CASE("validate_pair enforces range and distinctness") {
  Graph g = make_path(3);
  CHECK_NOTHROW(validate_pair(g, {0, 2}));
  CHECK_THROWS_AS(validate_pair(g, {0, 3}), std::out_of_range);
  CHECK_THROWS_AS(validate_pair(g, {1, 1}), config_error);
}

TEST_CASE("load_edge_list parses the text format") {
  auto dir = testutil::make_temp_dir("graph_load");

  auto plain = dir / "plain.txt";
  testutil::write_text(plain, "0 1\n1 2\n");
  Graph g = load_edge_list(plain);
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 2);

  auto commented = dir / "commented.txt";
  testutil::write_text(commented, "# comment\n0 1\n");
  Graph c = load_edge_list(commented);
  CHECK(c.num_nodes() == 2);
  CHECK(c.num_edges() == 1);

  auto blanks = dir / "blanks.txt";
  testutil::write_text(blanks, "\n  \n0 1\n\n");
  CHECK(load_edge_list(blanks).num_edges() == 1);
}

TEST_CASE("load_edge_list reports malformed lines with their number") {
  auto dir = testutil::make_temp_dir("graph_load_err");
  auto bad = dir / "bad.txt";
  testutil::write_text(bad, "0 x\n");
  try {
    load_edge_list(bad);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line() == 1);
    CHECK(std::string(e.what()).find(":1:") != std::string::npos);
  }

  auto trailing = dir / "trailing.txt";
  testutil::write_text(trailing, "0 1\n1 2 3\n");
  try {
    load_edge_list(trailing);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line() == 2);
  }

  auto empty = dir / "empty.txt";
  testutil::write_text(empty, "# nothing\n");
  CHECK_THROWS_AS(load_edge_list(empty), parse_error);

  CHECK_THROWS_AS(load_edge_list(dir / "does_not_exist.txt"), std::runtime_error);
}

TEST_CASE("load_edge_list honors a num_nodes override") {
  auto dir = testutil::make_temp_dir("graph_override");
  auto file = dir / "g.txt";
  testutil::write_text(file, "0 1\n");
  CHECK(load_edge_list(file).num_nodes() == 2);
  CHECK(load_edge_list(file, 5).num_nodes() == 5);
  CHECK_THROWS_AS(load_edge_list(file, 1), std::out_of_range);
}

TEST_CASE("edge list round trip reproduces the adjacency") {
  Graph g = make_er(30, 0.2, 42);
  auto dir = testutil::make_temp_dir("graph_roundtrip");
  auto file = dir / "g.txt";
  write_edge_list(g, file);
  Graph back = load_edge_list(file, g.num_nodes());
  REQUIRE(back.num_nodes() == g.num_nodes());
  CHECK(back.num_edges() == g.num_edges());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    auto a = g.neighbors(v);
    auto b = back.neighbors(v);
    REQUIRE(a.size() == b.size());
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST_CASE("generators build the documented shapes") {
  Graph cycle = make_cycle(4);
  CHECK(cycle.num_nodes() == 4);
  CHECK(cycle.num_edges() == 4);

  Graph theta = make_theta(3, 2);
  CHECK(theta.num_nodes() == 5);
  CHECK(theta.num_edges() == 6);
  CHECK(theta.degree(0) == 3);
  CHECK(theta.degree(1) == 3);
  CHECK_FALSE(theta.has_edge(0, 1));

  Graph path = make_path(1);
  CHECK(path.num_nodes() == 1);
  CHECK(path.num_edges() == 0);

  CHECK_THROWS_AS(make_theta(1, 2), config_error);
  CHECK_THROWS_AS(make_cycle(2), config_error);
  CHECK_THROWS_AS(make_er(10, 1.5, 0), config_error);
}

TEST_CASE("random generators are deterministic in the seed") {
  Graph a = make_er(50, 0.1, 7);
  Graph b = make_er(50, 0.1, 7);
  CHECK(a.edges() == b.edges());
  CHECK(a.num_edges() > 0);

  Graph c = make_sbm2(40, 0.3, 0.02, 9);
  Graph d = make_sbm2(40, 0.3, 0.02, 9);
  CHECK(c.edges() == d.edges());

  SyntheticSpec spec;
  spec.kind = GraphKind::er;
  spec.n = 50;
  spec.p = 0.1;
  spec.seed = 7;
  CHECK(generate_synthetic(spec).edges() == a.edges());
}

TEST_CASE("generated graphs satisfy the structural invariants") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(uniform_below(rng, 40));
    double p = 0.05 + 0.4 * uniform01(rng);
    Graph g = make_er(n, p, rng());
    CHECK(testutil::graph_is_valid(g));
  }
  CHECK(testutil::graph_is_valid(make_sbm2(31, 0.4, 0.05, 3)));
  CHECK(testutil::graph_is_valid(make_theta(4, 3)));
}

TEST_CASE("relabel maps edges and rejects non-permutations") {
  Graph g = make_path(3);
  std::vector<NodeId> perm{2, 0, 1};
  Graph r = relabel(g, perm);
  CHECK(r.has_edge(2, 0));  // edge (0,1) -> (2,0)
  CHECK(r.has_edge(0, 1));  // edge (1,2) -> (0,1)
  CHECK_FALSE(r.has_edge(2, 1));
  CHECK(testutil::graph_is_valid(r));

  std::vector<NodeId> bad{0, 0, 1};
  CHECK_THROWS_AS(relabel(g, bad), config_error);
}

TEST_CASE("write_edge_list emits ascending src < dst lines") {
  Graph theta = make_theta(3, 2);
  std::ostringstream out;
  write_edge_list(theta, out);
  CHECK(out.str() == "0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n");
}
