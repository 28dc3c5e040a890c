#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "sandpile/calculus.hpp"
#include "sandpile/graph.hpp"

namespace sandpile {

enum class ConstraintKind { uniform, inverse_sqrt_weight, inverse_weight, custom };

std::string_view constraint_kind_name(ConstraintKind kind);

/// Per-edge slope bounds |u(y) - u(x)| <= c_xy. Holds a non-owning
/// reference to the graph, which must outlive it.
class ConstraintSet {
 public:
  ConstraintSet(const WeightedGraph& g, ConstraintKind kind);
  /// Custom bounds, indexed like g.edges().
  ConstraintSet(const WeightedGraph& g, std::vector<double> bounds);

  const WeightedGraph& graph() const { return *graph_; }
  ConstraintKind kind() const { return kind_; }
  std::span<const double> bounds() const { return bounds_; }
  double bound(std::size_t e) const { return bounds_[e]; }

  /// Energy whose p → ∞ limit is this set. Throws ValidationError for custom bounds.
  EnergyModel energy_model() const;

 private:
  const WeightedGraph* graph_;
  ConstraintKind kind_;
  std::vector<double> bounds_;
};

bool is_stable(const VertexField& u, const ConstraintSet& K, double tol = 0.0);

/// max_e |∇u_e| / c_e.
double max_relative_slope(const VertexField& u, const ConstraintSet& K);

/// Edges whose constraint is binding: |gap| >= c - slack.
std::vector<std::size_t> active_edges(const VertexField& u, const ConstraintSet& K, double slack);

struct ProjectionOptions {
  double tol = 1e-10;
  std::size_t max_iter = 100000;
};

struct ProjectionStats {
  std::size_t sweeps = 0;
  double last_change = 0.0;
};

/// argmin_{v ∈ K} ½ Σ_x d_x (v_x - z_x)², by Dykstra's cyclic projections in
/// the degree-weighted inner product. Throws SolverError after max_iter sweeps.
VertexField project(const ConstraintSet& K, const VertexField& z, const ProjectionOptions& options = {},
                    ProjectionStats* stats = nullptr);

/// Exact projection by active-set enumeration, for graphs with at most 12 edges.
VertexField project_oracle(const ConstraintSet& K, const VertexField& z);

struct ResolventOptions {
  double tol = 1e-10;
  std::size_t max_iter = 500;
};

struct ResolventStats {
  std::size_t iterations = 0;
  double gradient_norm = 0.0;
};

/// argmin_v ½ Σ_x d_x (v_x - z_x)² + λ J_p(v). Damped Newton with Armijo
/// backtracking; stops when ‖∇Φ / d‖_ν <= tol.
VertexField resolvent_p(const WeightedGraph& g, double p, EnergyModel model, double lambda,
                        const VertexField& z, const ResolventOptions& options = {},
                        ResolventStats* stats = nullptr);

}  // namespace sandpile
