#include <doctest.h>

#include <cmath>

#include "sandpile/errors.hpp"
#include "sandpile/scenario.hpp"
#include "sandpile/transport.hpp"
#include "support.hpp"

using namespace sandpile;
using doctest::Approx;

namespace {

struct ZInstance {
  WeightedGraph g;
  VertexField u;
  VertexField f0;
  VertexField f1;
};

// Growth on Z between the first two critical times, from the closed form.
ZInstance z_instance(double alpha, double t) {
  ZInstance z{build_truncated_z(6), {}, {}, {}};
  z.u = z.g.zeros();
  for (int x = -6; x <= 6; ++x) z.u[z.g.index_of(std::to_string(x))] = testing::z_lattice_height(alpha, t, x);
  z.f0 = make_field(z.g, {{"-1", alpha / 3}, {"0", alpha / 3}, {"1", alpha / 3}});
  z.f1 = make_field(z.g, {{"0", alpha}});
  return z;
}

std::vector<double> table_values(const DistanceTable& d) {
  std::vector<double> out;
  for (VertexIndex x = 0; x < d.size(); ++x) {
    for (VertexIndex y = 0; y < d.size(); ++y) out.push_back(d(x, y));
  }
  return out;
}

// Two random densities with equal ν-mass and sparse supports.
std::pair<VertexField, VertexField> random_densities(testing::Rng& rng, const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  VertexField f0(n);
  VertexField f1(n);
  for (VertexIndex x = 0; x < n; ++x) {
    if (testing::uniform(rng, 0, 1) < 0.6) f0[x] = testing::uniform(rng, 0, 2);
    if (testing::uniform(rng, 0, 1) < 0.6) f1[x] = testing::uniform(rng, 0, 2);
  }
  f0[0] += 0.5;
  f1[n - 1] += 0.5;
  const double scale = nu_total(g, f0) / nu_total(g, f1);
  for (auto& v : f1) v *= scale;
  return {f0, f1};
}

}  // namespace

TEST_CASE("is_lipschitz_wrt") {
  const WeightedGraph p4 = build_path(4);
  const DistanceTable d = DistanceTable::graph_metric(p4);
  CHECK(is_lipschitz_wrt(d, VertexField(4, 3.0)));
  CHECK(is_lipschitz_wrt(d, VertexField{0, 1, 2, 3}));
  CHECK_FALSE(is_lipschitz_wrt(d, VertexField{0, 1, 2, 3.5}));
  CHECK(is_lipschitz_wrt(d, VertexField{0, 1, 2, 3.5}, 0.5));
}

TEST_CASE("Lipschitz for d_G is stability under the uniform constraint") {
  auto rng = testing::make_rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = testing::uniform_index(rng, 2, 6);
    const WeightedGraph g = testing::random_connected_graph(rng, n, testing::uniform_index(rng, 0, n));
    const ConstraintSet K(g, ConstraintKind::uniform);
    const DistanceTable d = DistanceTable::graph_metric(g);
    // Mix of stable fields and arbitrary ones so both answers occur.
    const VertexField u = trial % 2 ? testing::random_stable_field(rng, K) : testing::random_field(rng, n, -1.5, 1.5);
    CHECK(is_lipschitz_wrt(d, u) == is_stable(u, K));
  }

  // Exhaustive over a small lattice of values on P3.
  const WeightedGraph p3 = build_path(3);
  const ConstraintSet K3(p3, ConstraintKind::uniform);
  const DistanceTable d3 = DistanceTable::graph_metric(p3);
  for (int a = -4; a <= 4; ++a) {
    for (int b = -4; b <= 4; ++b) {
      for (int c = -4; c <= 4; ++c) {
        const VertexField u{a * 0.5, b * 0.5, c * 0.5};
        CHECK(is_lipschitz_wrt(d3, u) == is_stable(u, K3));
      }
    }
  }
}

TEST_CASE("constraint metric uses the edge bounds") {
  const std::vector<EdgeSpec> e{{"x1", "x2", 1}, {"x2", "x3", 4}};
  const WeightedGraph g = build_graph(e);
  const DistanceTable d = DistanceTable::constraint_metric(ConstraintSet(g, ConstraintKind::inverse_sqrt_weight));
  CHECK(d(0, 2) == Approx(1.5));
  CHECK(d(2, 1) == Approx(0.5));
}

TEST_CASE("kantorovich_pairing") {
  const WeightedGraph p4 = build_path(4);
  const VertexField f{0.2, 0.0, 1.0, 0.3};
  CHECK(kantorovich_pairing(p4, VertexField{5, -1, 2, 0}, f, f) == 0.0);
  const VertexField f1{0.0, 0.6, 0.0, 1.3};
  CHECK(kantorovich_pairing(p4, VertexField(4, 2.0), f, f1) == Approx(0.0).scale(1.0));

  const ZInstance z = z_instance(1.0, 2.5);
  CHECK(kantorovich_pairing(z.g, z.u, z.f0, z.f1) == Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("ot_cost_oracle examples") {
  const WeightedGraph p4 = build_path(4);
  const DistanceTable d = DistanceTable::graph_metric(p4);
  const VertexField f{0.2, 0.0, 1.0, 0.3};
  CHECK(ot_cost_oracle(make_transport_instance(p4, d, f, f)) == 0.0);

  // Unit ν-mass at x1 (d = 1) moved to x4 (d = 1).
  const TransportInstance single = make_transport_instance(p4, d, VertexField{1, 0, 0, 0}, VertexField{0, 0, 0, 1});
  CHECK(ot_cost_oracle(single) == Approx(3.0).epsilon(1e-9));

  for (double alpha : {1.0, 2.0, 0.5}) {
    const ZInstance z = z_instance(alpha, 2.0 / alpha);
    const TransportInstance inst = make_transport_instance(z.g, DistanceTable::graph_metric(z.g), z.f0, z.f1);
    CHECK(ot_cost_oracle(inst) == Approx(4.0 * alpha / 3.0).epsilon(1e-9));
  }
}

TEST_CASE("transport instance validation") {
  const WeightedGraph p4 = build_path(4);
  const DistanceTable d = DistanceTable::graph_metric(p4);
  CHECK_THROWS_AS(make_transport_instance(p4, d, VertexField{1, 0, 0, 0}, VertexField{0, 0, 0, 2}), ValidationError);
  CHECK_THROWS_AS(make_transport_instance(p4, d, VertexField{-1, 1, 0, 0}, VertexField{0, 0, 0, 0}),
                  ValidationError);
  CHECK_THROWS_AS(make_transport_instance(p4, d, VertexField{1, 0, 0}, VertexField{0, 0, 1}), ValidationError);

  // 60 support vertices on each side exceeds the oracle limit.
  const WeightedGraph big = build_path(120);
  VertexField a = big.zeros();
  VertexField b = big.zeros();
  for (VertexIndex x = 0; x < 120; ++x) (x < 60 ? a : b)[x] = 1.0 / big.degree(x);
  const TransportInstance inst = make_transport_instance(big, DistanceTable::graph_metric(big), a, b);
  CHECK_THROWS_AS(ot_cost_oracle(inst), ValidationError);
}

TEST_CASE("weak duality and oracle symmetry on random instances") {
  auto rng = testing::make_rng(52);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = testing::uniform_index(rng, 2, 8);
    const WeightedGraph g = testing::random_connected_graph(rng, n, testing::uniform_index(rng, 0, n));
    const DistanceTable d = trial % 2 ? DistanceTable::graph_metric(g)
                                      : DistanceTable::constraint_metric(ConstraintSet(g, ConstraintKind::inverse_weight));
    const auto [f0, f1] = random_densities(rng, g);
    const TransportInstance forward = make_transport_instance(g, d, f0, f1);
    const TransportInstance backward = make_transport_instance(g, d, f1, f0);
    const double cost = ot_cost_oracle(forward);
    CHECK(cost >= 0.0);
    CHECK(ot_cost_oracle(backward) == Approx(cost).epsilon(1e-9).scale(1.0));
    for (int k = 0; k < 5; ++k) {
      const VertexField u = testing::random_lipschitz_field(rng, n, table_values(d));
      REQUIRE(is_lipschitz_wrt(d, u, 1e-12));
      CHECK(kantorovich_pairing(g, u, f0, f1) <= cost + 1e-9);
    }
  }
}

TEST_CASE("verify_potential") {
  for (double t : {1.5, 2.0, 3.5}) {
    const ZInstance z = z_instance(1.0, t);
    const TransportInstance inst = make_transport_instance(z.g, DistanceTable::graph_metric(z.g), z.f0, z.f1);
    CHECK(verify_potential(inst, z.u, 1e-6));
    CHECK_FALSE(verify_potential(inst, z.g.zeros(), 1e-6));
    VertexField steep = z.u;
    steep[z.g.index_of("0")] += 0.5;
    CHECK_THROWS_AS(verify_potential(inst, steep, 1e-6), ValidationError);
  }
}

TEST_CASE("dual criteria") {
  const ZInstance z = z_instance(1.0, 2.0);
  const DistanceTable d = DistanceTable::graph_metric(z.g);
  const VertexIndex zero = z.g.index_of("0");
  const TransportMap collapse_to_zero{{z.g.index_of("-1"), zero}, {z.g.index_of("1"), zero}, {zero, zero}};
  CHECK(verify_dual_criteria(z.g, d, z.u, collapse_to_zero, z.f0, z.f1, 1e-9));

  // Identity is certified for equal densities and any Lipschitz u.
  const TransportMap identity{{z.g.index_of("-1"), z.g.index_of("-1")}, {zero, zero}, {z.g.index_of("1"), z.g.index_of("1")}};
  CHECK(verify_dual_criteria(z.g, d, z.u, identity, z.f0, z.f0, 1e-9));
  CHECK(verify_dual_criteria(z.g, d, z.g.zeros(), identity, z.f0, z.f0, 1e-9));

  VertexField flat = z.u;
  flat[zero] = flat[z.g.index_of("1")];
  CHECK_FALSE(verify_dual_criteria(z.g, d, flat, collapse_to_zero, z.f0, z.f1, 1e-9));
  // The map must push f0 onto f1.
  CHECK_FALSE(verify_dual_criteria(z.g, d, z.u, identity, z.f0, z.f1, 1e-9));
}

TEST_CASE("growth solutions are Kantorovich potentials for (rate, source)") {
  for (const char* name : {"z_lattice", "star", "p4_two_sources_a3b1", "p4_two_sources_a2b1", "chain_w4_model2"}) {
    CAPTURE(name);
    ScenarioConfig cfg = load_scenario(testing::scenario_dir() / (std::string(name) + ".json"));
    cfg.T = std::min(cfg.T, 5.0);
    const ConstraintSet K = cfg.constraints();
    const Trajectory traj = solve_growth(K, cfg.u0, cfg.source, cfg.T, cfg.dt, cfg.solve_options());
    const WeightedGraph& g = *cfg.graph;
    const DistanceTable d = DistanceTable::constraint_metric(K);
    const double tol = 10 * cfg.dt;
    std::size_t checked = 0;
    for (std::size_t n = 0; n + 1 < traj.size(); n += 97) {
      const double h = traj.times[n + 1] - traj.times[n];
      VertexField rate(g.vertex_count());
      for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
        rate[x] = std::max(0.0, (traj.states[n + 1][x] - traj.states[n][x]) / h);
      }
      VertexField f = cfg.source.at(traj.times[n], g.vertex_count());
      // Clamping can shift the rate's mass by rounding; rescale to match exactly.
      const double mass = nu_total(g, rate);
      if (mass <= 0.0) continue;
      for (auto& r : rate) r *= nu_total(g, f) / mass;
      const TransportInstance inst = make_transport_instance(g, d, rate, f);
      CHECK(is_lipschitz_wrt(d, traj.states[n], tol));
      CHECK(verify_potential(inst, traj.states[n], tol));
      ++checked;
    }
    CHECK(checked > 10);
  }
}
