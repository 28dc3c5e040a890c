#include "sandpile/calculus.hpp"

#include <cmath>
#include <string>

#include "sandpile/errors.hpp"
#include "sandpile/kernels.hpp"

namespace sandpile {
namespace {

constexpr double tiny = 1e-300;

void check_p(double p) {
  if (!(p >= 2.0) || !std::isfinite(p)) {
    throw ValidationError("p must be a finite real >= 2, got " + std::to_string(p));
  }
}

void check_field(const WeightedGraph& g, const VertexField& u) {
  if (u.size() != g.vertex_count()) throw ValidationError("vertex field does not match the graph");
}

}  // namespace

double EdgeField::at(const WeightedGraph& g, VertexIndex x, VertexIndex y) const {
  const auto e = g.edge_between(x, y);
  if (!e) throw ValidationError("vertices are not adjacent");
  return g.edges()[*e].tail == x ? forward(*e) : backward(*e);
}

double model_slope_bound(EnergyModel model, double weight) {
  switch (model) {
    case EnergyModel::graph:
      return 1.0;
    case EnergyModel::weighted:
      return 1.0 / std::sqrt(weight);
    case EnergyModel::inverse_weight:
      return 1.0 / weight;
  }
  return 1.0;
}

double signed_power(double x, double exponent) {
  const double magnitude = std::abs(x);
  if (magnitude < tiny) return 0.0;
  const double r = std::exp(exponent * std::log(magnitude));
  return x < 0.0 ? -r : r;
}

double edge_flux(double difference, double weight, double p, EnergyModel model) {
  const double magnitude = std::abs(difference);
  if (magnitude < tiny) return 0.0;
  const double c = model_slope_bound(model, weight);
  // w · (|g|/c)^{p-2} · |g| in log form.
  const double log_flux =
      std::log(weight) + (p - 2.0) * (std::log(magnitude) - std::log(c)) + std::log(magnitude);
  const double r = std::exp(log_flux);
  if (!std::isfinite(r)) throw SolverError("p-Laplacian flux overflow (p = " + std::to_string(p) + ")");
  return difference < 0.0 ? -r : r;
}

EdgeField nonlocal_gradient(const WeightedGraph& g, const VertexField& u) {
  check_field(g, u);
  std::vector<double> diff(g.edge_count());
  kernels::edge_differences(u.values(), g.edge_tails(), g.edge_heads(), diff);
  EdgeField grad(g.edge_count());
  for (std::size_t e = 0; e < diff.size(); ++e) {
    grad.forward(e) = diff[e];
    grad.backward(e) = -diff[e];
  }
  return grad;
}

VertexField divergence(const WeightedGraph& g, const EdgeField& z) {
  if (z.edge_count() != g.edge_count()) throw ValidationError("edge field does not match the graph");
  VertexField out = g.zeros();
  const auto edges = g.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double w = edges[e].weight;
    // tail sees z(tail, head) - z(head, tail); head sees the opposite.
    const double net = z.forward(e) - z.backward(e);
    out[edges[e].tail] += 0.5 * net * w;
    out[edges[e].head] -= 0.5 * net * w;
  }
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) out[x] /= g.degree(x);
  return out;
}

VertexField laplacian(const WeightedGraph& g, const VertexField& u) {
  check_field(g, u);
  VertexField out = g.zeros();
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
    double sum = 0.0;
    for (const Incidence& inc : g.neighbors(x)) {
      sum += g.edges()[inc.edge].weight * (u[inc.neighbor] - u[x]);
    }
    out[x] = sum / g.degree(x);
  }
  return out;
}

VertexField p_laplacian(const WeightedGraph& g, const VertexField& u, double p, EnergyModel model) {
  check_p(p);
  check_field(g, u);
  std::vector<double> diff(g.edge_count());
  kernels::edge_differences(u.values(), g.edge_tails(), g.edge_heads(), diff);
  VertexField out = g.zeros();
  const auto edges = g.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double flux = edge_flux(diff[e], edges[e].weight, p, model);
    out[edges[e].tail] += flux;
    out[edges[e].head] -= flux;
  }
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) out[x] /= g.degree(x);
  return out;
}

VertexField p_laplacian_G(const WeightedGraph& g, const VertexField& u, double p) {
  return p_laplacian(g, u, p, EnergyModel::graph);
}

VertexField p_laplacian_w(const WeightedGraph& g, const VertexField& u, double p) {
  return p_laplacian(g, u, p, EnergyModel::weighted);
}

double energy_Jp(const WeightedGraph& g, const VertexField& u, double p, EnergyModel model) {
  check_p(p);
  check_field(g, u);
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    const double magnitude = std::abs(u[e.head] - u[e.tail]);
    if (magnitude < tiny) continue;
    const double c = model_slope_bound(model, e.weight);
    // w c² (|g|/c)^p, counted once per unordered edge (the two orientations
    // contribute equally, cancelling the 1/2).
    total += std::exp(std::log(e.weight) + 2.0 * std::log(c) + p * (std::log(magnitude) - std::log(c)));
  }
  const double energy = total / p;
  if (!std::isfinite(energy)) throw SolverError("p-energy overflow (p = " + std::to_string(p) + ")");
  return energy;
}

double integration_by_parts_residual(const WeightedGraph& g, const VertexField& u,
                                     const VertexField& v, double p, EnergyModel model) {
  check_field(g, v);
  const VertexField lap = p_laplacian(g, u, p, model);
  double vertex_side = 0.0;
  double scale = 0.0;
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
    const double term = lap[x] * v[x] * g.degree(x);
    vertex_side += term;
    scale += std::abs(term);
  }
  double edge_side = 0.0;
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
    for (const Incidence& inc : g.neighbors(x)) {
      const VertexIndex y = inc.neighbor;
      const double w = g.edges()[inc.edge].weight;
      const double grad_u = u[y] - u[x];
      const double grad_v = v[y] - v[x];
      const double c = model_slope_bound(model, w);
      const double s = std::abs(grad_u) / c;
      edge_side += w * std::pow(s, p - 2.0) * grad_u * grad_v;
    }
  }
  return std::abs(vertex_side + 0.5 * edge_side) / (1.0 + scale);
}

}  // namespace sandpile
