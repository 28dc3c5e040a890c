#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sandpile/graph.hpp"

namespace sandpile {

/// Value per oriented edge. Edge e of the graph owns two slots:
/// forward(e) for (tail, head) and backward(e) for (head, tail).
class EdgeField {
 public:
  EdgeField() = default;
  explicit EdgeField(std::size_t edge_count, double value = 0.0) : values_(2 * edge_count, value) {}

  std::size_t edge_count() const { return values_.size() / 2; }

  double& forward(std::size_t e) { return values_[2 * e]; }
  double forward(std::size_t e) const { return values_[2 * e]; }
  double& backward(std::size_t e) { return values_[2 * e + 1]; }
  double backward(std::size_t e) const { return values_[2 * e + 1]; }

  /// z(x, y) for adjacent x, y.
  double at(const WeightedGraph& g, VertexIndex x, VertexIndex y) const;

  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// Which p-energy is meant. The three variants share one edge law,
/// flux = w · s^{p-2} · ∇u with relative slope s = |∇u| / c and
///   graph:          c = 1          (J_p^G, Δ_p^G)
///   weighted:       c = 1/√w       (J_p^w, Δ_p^w)
///   inverse_weight: c = 1/w        (energy with weights w^{p-1})
enum class EnergyModel { graph, weighted, inverse_weight };

/// Per-edge slope scale c_xy associated with the model.
double model_slope_bound(EnergyModel model, double weight);

/// sign(x)·|x|^exponent, evaluated as exp(exponent·ln|x|); |x| < 1e-300 gives 0.
double signed_power(double x, double exponent);

/// ∇u(x,y) = u(y) - u(x) on both orientations of every edge.
EdgeField nonlocal_gradient(const WeightedGraph& g, const VertexField& u);

/// div z(x) = ½ (1/d_x) Σ_{y∼x} (z(x,y) - z(y,x)) w_xy.
VertexField divergence(const WeightedGraph& g, const EdgeField& z);

/// Δ_G u(x) = (1/d_x) Σ_{y∼x} w_xy (u(y) - u(x)).
VertexField laplacian(const WeightedGraph& g, const VertexField& u);

/// Degree-normalised p-Laplacian for any model. Throws SolverError when a
/// flux overflows.
VertexField p_laplacian(const WeightedGraph& g, const VertexField& u, double p, EnergyModel model);
VertexField p_laplacian_G(const WeightedGraph& g, const VertexField& u, double p);
VertexField p_laplacian_w(const WeightedGraph& g, const VertexField& u, double p);

/// J_p(u) = (1/2p) Σ over ordered adjacent pairs of the model's edge energy.
double energy_Jp(const WeightedGraph& g, const VertexField& u, double p, EnergyModel model);

/// Edge flux w · s^{p-2} · g for a signed difference g on an edge of weight w.
double edge_flux(double difference, double weight, double p, EnergyModel model);

/// |Σ_x Δ_p u(x) v(x) d_x + ½ Σ_{(x,y)} flux(x,y) ∇v(x,y)|, divided by
/// 1 + Σ_x |Δ_p u(x) v(x)| d_x. The two sums are computed independently
/// (vertex form through p_laplacian, edge form over ordered pairs).
double integration_by_parts_residual(const WeightedGraph& g, const VertexField& u,
                                     const VertexField& v, double p, EnergyModel model);

}  // namespace sandpile
