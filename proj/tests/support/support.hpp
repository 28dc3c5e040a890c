#pragma once

// Test-side generators and independent oracles. Nothing here calls the
// solver under test to produce an expected value.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sandpile/evolution.hpp"
#include "sandpile/graph.hpp"
#include "sandpile/proximal.hpp"

namespace sandpile::testing {

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }
double uniform(Rng& rng, double lo, double hi);
std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi);  // inclusive

/// Random connected graph: random spanning tree plus extra edges.
/// Vertex ids v0..v{n-1}; weights in [w_lo, w_hi] (all 1 if w_lo == w_hi).
WeightedGraph random_connected_graph(Rng& rng, std::size_t n, std::size_t extra_edges, double w_lo = 0.25,
                                     double w_hi = 4.0);
VertexField random_field(Rng& rng, std::size_t n, double lo, double hi);
/// Random element of K, built as a Lipschitz function of the constraint metric.
VertexField random_stable_field(Rng& rng, const ConstraintSet& K);
/// u(x) = min_k (a_k + dist(x, y_k)): 1-Lipschitz for the given table.
VertexField random_lipschitz_field(Rng& rng, std::size_t n, const std::vector<double>& dist_row_major);

/// Exact solution of u_t = Δ_G u at time T via the eigen-decomposition of the
/// symmetrised graph Laplacian.
VertexField linear_flow_oracle(const WeightedGraph& g, const VertexField& u0, double T);

/// Root s >= 0 of s + 2 λ s² = 2, by bisection.
double single_edge_gap_oracle(double lambda);

/// Growth on Z from a point source of rate α at the origin:
/// for n²/α <= t < (n+1)²/α, u(x) = n - |x| + α (t - n²/α) / (2n + 1) on |x| <= n.
double z_lattice_height(double alpha, double t, int x);

/// First time u(x) reaches `level`, interpolated linearly between samples.
std::optional<double> level_crossing(const Trajectory& traj, VertexIndex x, double level);
/// Time of the first event that activates edge e.
std::optional<double> activation_time(const Trajectory& traj, std::size_t e);
/// (u(t_b, x) - u(t_a, x)) / (t_b - t_a) using the nearest samples.
double growth_rate(const Trajectory& traj, VertexIndex x, double t_a, double t_b);

std::filesystem::path scenario_dir();
std::vector<std::filesystem::path> shipped_scenarios();

}  // namespace sandpile::testing
