#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "sandpile/graph.hpp"
#include "sandpile/proximal.hpp"

namespace sandpile {

/// Dense symmetric table of pairwise distances.
class DistanceTable {
 public:
  DistanceTable() = default;
  DistanceTable(std::size_t n, std::vector<double> values);

  /// Hop-count metric d_G.
  static DistanceTable graph_metric(const WeightedGraph& g);
  /// Shortest paths with edge lengths c_xy taken from K.
  static DistanceTable constraint_metric(const ConstraintSet& K);

  std::size_t size() const { return n_; }
  double operator()(VertexIndex x, VertexIndex y) const { return values_[x * n_ + y]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Densities f0, f1 >= 0 with equal ν-mass, moved at cost dist(x, y) per unit.
struct TransportInstance {
  const WeightedGraph* graph;
  DistanceTable dist;
  VertexField f0;
  VertexField f1;
};

/// Validates nonnegativity and equal mass (1e-9 relative).
TransportInstance make_transport_instance(const WeightedGraph& g, DistanceTable dist, VertexField f0,
                                          VertexField f1);

bool is_lipschitz_wrt(const DistanceTable& dist, const VertexField& u, double tol = 0.0);

/// Σ_x u(x) (f1(x) - f0(x)) d_x.
double kantorovich_pairing(const WeightedGraph& g, const VertexField& u, const VertexField& f0,
                           const VertexField& f1);

/// Exact minimal cost of moving f0 dν onto f1 dν, by min-cost flow on
/// integer-scaled masses. Supports up to 50 vertices in each support.
double ot_cost_oracle(const TransportInstance& instance);

/// Pairing reaches the oracle cost within tol. Throws ValidationError if u
/// is not 1-Lipschitz for the instance metric.
bool verify_potential(const TransportInstance& instance, const VertexField& u, double tol);

/// Map T on supp(f0) (vertices absent from the map are fixed points).
using TransportMap = std::map<VertexIndex, VertexIndex>;

/// u is Lipschitz, T pushes f0 dν onto f1 dν, and u rises by exactly the
/// distance along T: u(T(x)) - u(x) = dist(x, T(x)) on supp(f0).
bool verify_dual_criteria(const WeightedGraph& g, const DistanceTable& dist, const VertexField& u,
                          const TransportMap& T, const VertexField& f0, const VertexField& f1, double tol);

}  // namespace sandpile
