#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "sandpile/errors.hpp"
#include "sandpile/graph.hpp"
#include "support.hpp"

using namespace sandpile;
using sandpile::testing::make_rng;

namespace {

std::vector<double> degrees_of(const WeightedGraph& g) { return {g.degrees().begin(), g.degrees().end()}; }

}  // namespace

TEST_CASE("path P4 degrees") {
  const std::vector<EdgeSpec> edges{{"x1", "x2", 1}, {"x2", "x3", 1}, {"x3", "x4", 1}};
  const WeightedGraph g = build_graph(edges);
  CHECK(degrees_of(g) == std::vector<double>{1, 2, 2, 1});
  CHECK(g.edge_count() == 3);
}

TEST_CASE("star centre degree is the sum of its weights") {
  const std::vector<EdgeSpec> edges{{"x0", "x1", 0.5}, {"x1", "x2", 2.0}, {"x1", "x3", 3.0}};
  const WeightedGraph g = build_graph(edges);
  CHECK(g.degree(g.index_of("x1")) == doctest::Approx(5.5));
  CHECK(g.degree(g.index_of("x0")) == doctest::Approx(0.5));
}

TEST_CASE("construction errors") {
  const std::vector<EdgeSpec> loop{{"a", "a", 1}};
  CHECK_THROWS_AS(build_graph(loop), ValidationError);
  const std::vector<EdgeSpec> negative{{"a", "b", -1}};
  CHECK_THROWS_AS(build_graph(negative), ValidationError);
  const std::vector<EdgeSpec> zero{{"a", "b", 0}};
  CHECK_THROWS_AS(build_graph(zero), ValidationError);
  const std::vector<EdgeSpec> duplicate{{"a", "b", 1}, {"b", "a", 2}};
  CHECK_THROWS_AS(build_graph(duplicate), ValidationError);
  const std::vector<EdgeSpec> disconnected{{"a", "b", 1}, {"c", "d", 1}};
  CHECK_THROWS_AS(build_graph(disconnected), ValidationError);
  const std::vector<EdgeSpec> heavy{{"a", "b", 5}};
  CHECK_THROWS_AS(build_graph(heavy, GraphOptions{4.0, {}}), ValidationError);
  CHECK_NOTHROW(build_graph(heavy, GraphOptions{5.0, {}}));
}

TEST_CASE("canonical ordering is lexicographic and edges are sorted") {
  const std::vector<EdgeSpec> edges{{"c", "a", 1}, {"b", "a", 2}, {"c", "b", 3}};
  const WeightedGraph g = build_graph(edges);
  CHECK(std::vector<std::string>(g.vertex_ids().begin(), g.vertex_ids().end()) ==
        std::vector<std::string>{"a", "b", "c"});
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    CHECK(g.edges()[e].tail < g.edges()[e].head);
    if (e > 0) {
      const auto prev = std::pair(g.edges()[e - 1].tail, g.edges()[e - 1].head);
      CHECK(prev < std::pair(g.edges()[e].tail, g.edges()[e].head));
    }
  }
}

TEST_CASE("weight table is symmetric") {
  auto rng = make_rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const WeightedGraph g = testing::random_connected_graph(rng, 7, 6);
    for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
      for (VertexIndex y = 0; y < g.vertex_count(); ++y) CHECK(g.weight(x, y) == g.weight(y, x));
      CHECK(g.weight(x, x) == 0.0);
    }
  }
}

TEST_CASE("nu_mass") {
  const WeightedGraph g = build_path(4);
  CHECK(nu_mass(g, VertexSet{}) == 0.0);
  const VertexSet all{0, 1, 2, 3};
  CHECK(nu_mass(g, all) == 6.0);
  CHECK(nu_mass(g, VertexSet{g.index_of("x2")}) == 2.0);
  const std::vector<std::string> bad{"x9"};
  CHECK_THROWS_AS(vertex_set(g, bad), ValidationError);
}

TEST_CASE("inner_product_nu") {
  const WeightedGraph g = build_path(4);
  CHECK(inner_product_nu(g, g.zeros(), VertexField{1, 2, 3, 4}) == 0.0);
  const VertexField ind = make_field(g, {{"x2", 1.0}});
  CHECK(inner_product_nu(g, ind, ind) == 2.0);
  auto rng = make_rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const VertexField u = testing::random_field(rng, 4, -3, 3);
    const VertexField v = testing::random_field(rng, 4, -3, 3);
    CHECK(inner_product_nu(g, u, v) == inner_product_nu(g, v, u));
  }
}

TEST_CASE("graph_distance") {
  const WeightedGraph g = build_path(4);
  CHECK(graph_distance(g, 2, 2) == 0);
  CHECK(graph_distance(g, g.index_of("x1"), g.index_of("x4")) == 3);
  const std::vector<EdgeSpec> heavy{{"x1", "x2", 7}, {"x2", "x3", 0.1}, {"x3", "x4", 3}};
  const WeightedGraph h = build_graph(heavy);
  for (VertexIndex x = 0; x < 4; ++x) {
    for (VertexIndex y = 0; y < 4; ++y) CHECK(graph_distance(g, x, y) == graph_distance(h, x, y));
  }
}

TEST_CASE("constraint_distance") {
  const std::vector<EdgeSpec> chain{{"x1", "x2", 1}, {"x2", "x3", 4}};
  const WeightedGraph g = build_graph(chain);
  const std::vector<double> lengths{1.0, 0.5};
  CHECK(constraint_distance(g, lengths, 0, 2) == doctest::Approx(1.5));

  const WeightedGraph p4 = build_path(4);
  const std::vector<double> ones(p4.edge_count(), 1.0);
  for (VertexIndex x = 0; x < 4; ++x) {
    for (VertexIndex y = 0; y < 4; ++y) {
      CHECK(constraint_distance(p4, ones, x, y) == static_cast<double>(graph_distance(p4, x, y)));
    }
  }

  auto rng = make_rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const WeightedGraph r = testing::random_connected_graph(rng, 6, 4);
    std::vector<double> c;
    for (const Edge& e : r.edges()) c.push_back(1.0 / std::sqrt(e.weight));
    for (VertexIndex x = 0; x < r.vertex_count(); ++x) {
      for (VertexIndex y = 0; y < r.vertex_count(); ++y) {
        CHECK(constraint_distance(r, c, x, y) == doctest::Approx(constraint_distance(r, c, y, x)).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("graph_distance triangle inequality, exhaustive on small graphs") {
  auto rng = make_rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = testing::uniform_index(rng, 2, 8);
    const WeightedGraph g = testing::random_connected_graph(rng, n, testing::uniform_index(rng, 0, n));
    for (VertexIndex x = 0; x < n; ++x) {
      for (VertexIndex y = 0; y < n; ++y) {
        for (VertexIndex z = 0; z < n; ++z) {
          CHECK(graph_distance(g, x, z) <= graph_distance(g, x, y) + graph_distance(g, y, z));
        }
      }
    }
  }
}

TEST_CASE("unit constraint distance equals hop distance on random graphs") {
  auto rng = make_rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    const WeightedGraph g = testing::random_connected_graph(rng, 8, 5);
    const std::vector<double> ones(g.edge_count(), 1.0);
    for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
      const auto hops = graph_distances_from(g, x);
      const auto lengths = constraint_distances_from(g, ones, x);
      for (VertexIndex y = 0; y < g.vertex_count(); ++y) CHECK(lengths[y] == static_cast<double>(hops[y]));
    }
  }
}

TEST_CASE("nonlocal_boundary") {
  const WeightedGraph g = build_path(4);
  CHECK(nonlocal_boundary(g, VertexSet{g.index_of("x2")}) == VertexSet{g.index_of("x1"), g.index_of("x3")});
  CHECK(nonlocal_boundary(g, VertexSet{0, 1, 2, 3}).empty());
  const WeightedGraph z = build_truncated_z(3);
  CHECK(nonlocal_boundary(z, VertexSet{z.index_of("0")}) == VertexSet{z.index_of("-1"), z.index_of("1")});

  auto rng = make_rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const WeightedGraph r = testing::random_connected_graph(rng, 7, 3);
    VertexSet a;
    for (VertexIndex x = 0; x < r.vertex_count(); ++x) {
      if (testing::uniform(rng, 0, 1) < 0.4) a.push_back(x);
    }
    for (VertexIndex y : nonlocal_boundary(r, a)) CHECK(std::find(a.begin(), a.end(), y) == a.end());
  }
}

TEST_CASE("generators") {
  const WeightedGraph z = build_truncated_z(3);
  CHECK(z.vertex_count() == 7);
  for (int x = -3; x <= 3; ++x) {
    CHECK(z.degree(z.index_of(std::to_string(x))) == (std::abs(x) == 3 ? 1.0 : 2.0));
  }
  CHECK(z.guard_band().size() == 4);

  const std::vector<double> w{1, 1, 1};
  const WeightedGraph s = build_star(w);
  CHECK(degrees_of(s) == std::vector<double>{1, 3, 1, 1});

  const WeightedGraph p = build_path(4);
  CHECK(degrees_of(p) == std::vector<double>{1, 2, 2, 1});
  CHECK_THROWS_AS(build_path(1), ValidationError);
  CHECK_THROWS_AS(build_truncated_z(0), ValidationError);
}

TEST_CASE("edge list text") {
  const WeightedGraph g = parse_edge_list("# chain\nx1 x2 1\n\nx2 x3 4\n");
  CHECK(g.vertex_count() == 3);
  CHECK(g.weight(g.index_of("x2"), g.index_of("x3")) == 4.0);
  CHECK_THROWS_AS(parse_edge_list("x1 x2\n"), ValidationError);
  CHECK_THROWS_AS(parse_edge_list("x1 x2 abc\n"), ValidationError);
}
