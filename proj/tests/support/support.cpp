#include "support.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace sandpile::testing {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

WeightedGraph random_connected_graph(Rng& rng, std::size_t n, std::size_t extra_edges, double w_lo, double w_hi) {
  auto weight = [&] { return w_lo == w_hi ? w_lo : uniform(rng, w_lo, w_hi); };
  auto name = [](std::size_t i) { return "v" + std::to_string(i); };
  std::vector<EdgeSpec> edges;
  std::set<std::pair<std::size_t, std::size_t>> used;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t j = uniform_index(rng, 0, i - 1);
    edges.push_back({name(j), name(i), weight()});
    used.insert({j, i});
  }
  const std::size_t max_edges = n * (n - 1) / 2;
  for (std::size_t k = 0; k < extra_edges && used.size() < max_edges; ++k) {
    for (;;) {
      std::size_t a = uniform_index(rng, 0, n - 1);
      std::size_t b = uniform_index(rng, 0, n - 1);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      if (!used.insert({a, b}).second) continue;
      edges.push_back({name(a), name(b), weight()});
      break;
    }
  }
  return build_graph(edges);
}

VertexField random_field(Rng& rng, std::size_t n, double lo, double hi) {
  VertexField u(n);
  for (auto& x : u) x = uniform(rng, lo, hi);
  return u;
}

VertexField random_stable_field(Rng& rng, const ConstraintSet& K) {
  const WeightedGraph& g = K.graph();
  const std::size_t n = g.vertex_count();
  // Lipschitz w.r.t. the constraint metric is equivalent to membership in K.
  std::vector<double> table(n * n);
  for (VertexIndex x = 0; x < n; ++x) {
    const auto row = constraint_distances_from(g, K.bounds(), x);
    std::copy(row.begin(), row.end(), table.begin() + static_cast<std::ptrdiff_t>(x * n));
  }
  return random_lipschitz_field(rng, n, table);
}

VertexField random_lipschitz_field(Rng& rng, std::size_t n, const std::vector<double>& dist) {
  const std::size_t anchors = uniform_index(rng, 1, std::max<std::size_t>(1, n / 2 + 1));
  VertexField u(n, std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < anchors; ++k) {
    const std::size_t y = uniform_index(rng, 0, n - 1);
    const double a = uniform(rng, -2.0, 2.0);
    for (std::size_t x = 0; x < n; ++x) u[x] = std::min(u[x], a + dist[x * n + y]);
  }
  return u;
}

VertexField linear_flow_oracle(const WeightedGraph& g, const VertexField& u0, double T) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    const auto a = static_cast<Eigen::Index>(e.tail);
    const auto b = static_cast<Eigen::Index>(e.head);
    L(a, a) += e.weight;
    L(b, b) += e.weight;
    L(a, b) -= e.weight;
    L(b, a) -= e.weight;
  }
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) s[i] = std::sqrt(g.degree(static_cast<VertexIndex>(i)));
  // y = D^{1/2} u solves y' = -D^{-1/2} L D^{-1/2} y.
  const Eigen::MatrixXd S = s.cwiseInverse().asDiagonal() * L * s.cwiseInverse().asDiagonal();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
  Eigen::VectorXd y0(n);
  for (Eigen::Index i = 0; i < n; ++i) y0[i] = s[i] * u0[static_cast<VertexIndex>(i)];
  const Eigen::VectorXd decay = (-T * eig.eigenvalues().array()).exp().matrix();
  const Eigen::VectorXd y = eig.eigenvectors() * decay.asDiagonal() * eig.eigenvectors().transpose() * y0;
  VertexField u(g.vertex_count());
  for (Eigen::Index i = 0; i < n; ++i) u[static_cast<VertexIndex>(i)] = y[i] / s[i];
  return u;
}

double single_edge_gap_oracle(double lambda) {
  double lo = 0.0;
  double hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid + 2.0 * lambda * mid * mid < 2.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double z_lattice_height(double alpha, double t, int x) {
  int n = 0;
  while ((n + 1.0) * (n + 1.0) / alpha <= t) ++n;
  const int r = std::abs(x);
  if (r > n) return 0.0;
  return (n - r) + alpha * (t - n * n / alpha) / (2.0 * n + 1.0);
}

std::optional<double> level_crossing(const Trajectory& traj, VertexIndex x, double level) {
  for (std::size_t n = 0; n < traj.size(); ++n) {
    if (traj.states[n][x] >= level) {
      if (n == 0) return traj.times[0];
      const double a = traj.states[n - 1][x];
      const double b = traj.states[n][x];
      const double frac = b == a ? 1.0 : (level - a) / (b - a);
      return traj.times[n - 1] + frac * (traj.times[n] - traj.times[n - 1]);
    }
  }
  return std::nullopt;
}

std::optional<double> activation_time(const Trajectory& traj, std::size_t e) {
  for (const ActiveSetEvent& ev : traj.events) {
    if (std::find(ev.activated.begin(), ev.activated.end(), e) != ev.activated.end()) return ev.t;
  }
  return std::nullopt;
}

double growth_rate(const Trajectory& traj, VertexIndex x, double t_a, double t_b) {
  const std::size_t a = traj.nearest(t_a);
  const std::size_t b = traj.nearest(t_b);
  return (traj.states[b][x] - traj.states[a][x]) / (traj.times[b] - traj.times[a]);
}

std::filesystem::path scenario_dir() { return SANDPILE_SCENARIO_DIR; }

std::vector<std::filesystem::path> shipped_scenarios() {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(scenario_dir())) {
    if (entry.path().extension() == ".json") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sandpile::testing
