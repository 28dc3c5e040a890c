#include "sandpile/proximal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sandpile/errors.hpp"
#include "sandpile/kernels.hpp"

namespace sandpile {

std::string_view constraint_kind_name(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::uniform:
      return "uniform";
    case ConstraintKind::inverse_sqrt_weight:
      return "inverse_sqrt_weight";
    case ConstraintKind::inverse_weight:
      return "inverse_weight";
    case ConstraintKind::custom:
      return "custom";
  }
  return "unknown";
}

ConstraintSet::ConstraintSet(const WeightedGraph& g, ConstraintKind kind) : graph_(&g), kind_(kind) {
  if (kind == ConstraintKind::custom) throw ValidationError("custom constraint set needs a bound table");
  const EnergyModel model = energy_model();
  bounds_.reserve(g.edge_count());
  for (const Edge& e : g.edges()) bounds_.push_back(model_slope_bound(model, e.weight));
}

ConstraintSet::ConstraintSet(const WeightedGraph& g, std::vector<double> bounds)
    : graph_(&g), kind_(ConstraintKind::custom), bounds_(std::move(bounds)) {
  if (bounds_.size() != g.edge_count()) {
    throw ValidationError("custom bounds: expected " + std::to_string(g.edge_count()) + " values, got " +
                          std::to_string(bounds_.size()));
  }
  for (std::size_t e = 0; e < bounds_.size(); ++e) {
    if (!(bounds_[e] > 0.0) || !std::isfinite(bounds_[e])) {
      throw ValidationError("custom bound for edge " + g.id(g.edges()[e].tail) + "-" +
                            g.id(g.edges()[e].head) + " must be positive and finite");
    }
  }
}

EnergyModel ConstraintSet::energy_model() const {
  switch (kind_) {
    case ConstraintKind::uniform:
      return EnergyModel::graph;
    case ConstraintKind::inverse_sqrt_weight:
      return EnergyModel::weighted;
    case ConstraintKind::inverse_weight:
      return EnergyModel::inverse_weight;
    case ConstraintKind::custom:
      break;
  }
  throw ValidationError("custom constraint sets have no associated p-energy");
}

bool is_stable(const VertexField& u, const ConstraintSet& K, double tol) {
  const auto edges = K.graph().edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!(std::abs(u[edges[e].head] - u[edges[e].tail]) <= K.bound(e) + tol)) return false;
  }
  return true;
}

double max_relative_slope(const VertexField& u, const ConstraintSet& K) {
  const auto edges = K.graph().edges();
  double L = 0.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    L = std::max(L, std::abs(u[edges[e].head] - u[edges[e].tail]) / K.bound(e));
  }
  return L;
}

std::vector<std::size_t> active_edges(const VertexField& u, const ConstraintSet& K, double slack) {
  std::vector<std::size_t> active;
  const auto edges = K.graph().edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (std::abs(u[edges[e].head] - u[edges[e].tail]) >= K.bound(e) - slack) active.push_back(e);
  }
  return active;
}

VertexField project(const ConstraintSet& K, const VertexField& z, const ProjectionOptions& options,
                    ProjectionStats* stats) {
  const WeightedGraph& g = K.graph();
  if (z.size() != g.vertex_count()) throw ValidationError("vertex field does not match the graph");
  if (!(options.tol > 0.0)) throw ValidationError("projection tolerance must be positive");
  if (stats) *stats = {};
  if (is_stable(z, K, options.tol)) return z;

  const auto edges = g.edges();
  const auto degrees = g.degrees();
  const std::size_t m = edges.size();
  // Dykstra increments, one pair (tail, head) per edge.
  std::vector<double> correction(2 * m, 0.0);
  VertexField v = z;
  std::vector<double> previous(v.size());

  for (std::size_t sweep = 1; sweep <= options.max_iter; ++sweep) {
    std::copy(v.begin(), v.end(), previous.begin());
    // The iterate can sit still for a few sweeps while the corrections are
    // still moving, so both enter the stopping test.
    double correction_change = 0.0;
    for (std::size_t e = 0; e < m; ++e) {
      const VertexIndex t = edges[e].tail;
      const VertexIndex h = edges[e].head;
      double& qt = correction[2 * e];
      double& qh = correction[2 * e + 1];
      const double yt = v[t] + qt;
      const double yh = v[h] + qh;
      const double gap = yh - yt;
      const double c = K.bound(e);
      double nt = yt;
      double nh = yh;
      if (std::abs(gap) > c) {
        const double shift = gap - std::copysign(c, gap);
        const double dt = degrees[t];
        const double dh = degrees[h];
        nt = yt + dh * shift / (dt + dh);
        nh = yh - dt * shift / (dt + dh);
      }
      const double dqt = yt - nt - qt;
      const double dqh = yh - nh - qh;
      correction_change += degrees[t] * dqt * dqt + degrees[h] * dqh * dqh;
      qt = yt - nt;
      qh = yh - nh;
      v[t] = nt;
      v[h] = nh;
    }
    const double change =
        std::sqrt(kernels::weighted_sq_diff_sum(v.values(), previous, degrees) + correction_change);
    if (stats) {
      stats->sweeps = sweep;
      stats->last_change = change;
    }
    if (change <= options.tol && is_stable(v, K, options.tol)) return v;
  }
  throw SolverError("projection did not converge within " + std::to_string(options.max_iter) + " sweeps");
}

}  // namespace sandpile
