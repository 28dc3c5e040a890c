// Exact projection onto the slope polytope by enumerating active sets.
//
// An optimal point is the weighted projection of z onto the affine hull of
// its binding constraints, and that hull is always cut out by a forest of
// binding edges. So it suffices to try every forest with every sign
// pattern, solve each in closed form, and keep the best feasible candidate.

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "sandpile/errors.hpp"
#include "sandpile/proximal.hpp"

namespace sandpile {
namespace {

constexpr std::size_t max_oracle_edges = 12;
constexpr double feasibility_slack = 1e-12;

struct Arc {
  VertexIndex to;
  double rise;  // prescribed u(to) - u(from)
};

class Enumerator {
 public:
  Enumerator(const ConstraintSet& K, const VertexField& z)
      : K_(K), g_(K.graph()), z_(z), arcs_(g_.vertex_count()),
        best_(z), best_objective_(std::numeric_limits<double>::infinity()) {}

  VertexField run() {
    std::vector<int> sign(g_.edge_count(), 0);
    recurse(0, sign);
    if (!std::isfinite(best_objective_)) throw SolverError("projection oracle found no feasible point");
    return best_;
  }

 private:
  VertexIndex find(std::vector<VertexIndex>& parent, VertexIndex x) const {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }

  bool acyclic(const std::vector<int>& sign, std::size_t upto) const {
    std::vector<VertexIndex> parent(g_.vertex_count());
    std::iota(parent.begin(), parent.end(), VertexIndex{0});
    for (std::size_t e = 0; e < upto; ++e) {
      if (sign[e] == 0) continue;
      const VertexIndex a = find(parent, g_.edges()[e].tail);
      const VertexIndex b = find(parent, g_.edges()[e].head);
      if (a == b) return false;
      parent[a] = b;
    }
    return true;
  }

  void recurse(std::size_t e, std::vector<int>& sign) {
    if (e == g_.edge_count()) {
      evaluate(sign);
      return;
    }
    sign[e] = 0;
    recurse(e + 1, sign);
    for (int s : {1, -1}) {
      sign[e] = s;
      if (acyclic(sign, e + 1)) recurse(e + 1, sign);
    }
    sign[e] = 0;
  }

  void evaluate(const std::vector<int>& sign) {
    const std::size_t n = g_.vertex_count();
    for (auto& a : arcs_) a.clear();
    for (std::size_t e = 0; e < sign.size(); ++e) {
      if (sign[e] == 0) continue;
      const Edge& edge = g_.edges()[e];
      const double rise = sign[e] * K_.bound(e);
      arcs_[edge.tail].push_back({edge.head, rise});
      arcs_[edge.head].push_back({edge.tail, -rise});
    }
    VertexField candidate(n);
    std::vector<char> seen(n, 0);
    std::vector<VertexIndex> component;
    std::vector<VertexIndex> stack;
    for (VertexIndex root = 0; root < n; ++root) {
      if (seen[root]) continue;
      component.clear();
      stack.assign(1, root);
      seen[root] = 1;
      candidate[root] = 0.0;
      while (!stack.empty()) {
        const VertexIndex x = stack.back();
        stack.pop_back();
        component.push_back(x);
        for (const Arc& a : arcs_[x]) {
          if (seen[a.to]) continue;
          seen[a.to] = 1;
          candidate[a.to] = candidate[x] + a.rise;
          stack.push_back(a.to);
        }
      }
      double num = 0.0;
      double den = 0.0;
      for (VertexIndex x : component) {
        num += g_.degree(x) * (z_[x] - candidate[x]);
        den += g_.degree(x);
      }
      const double offset = num / den;
      for (VertexIndex x : component) candidate[x] += offset;
    }
    if (!is_stable(candidate, K_, feasibility_slack)) return;
    double objective = 0.0;
    for (VertexIndex x = 0; x < n; ++x) {
      const double d = candidate[x] - z_[x];
      objective += g_.degree(x) * d * d;
    }
    if (objective < best_objective_) {
      best_objective_ = objective;
      best_ = candidate;
    }
  }

  const ConstraintSet& K_;
  const WeightedGraph& g_;
  const VertexField& z_;
  std::vector<std::vector<Arc>> arcs_;
  VertexField best_;
  double best_objective_;
};

}  // namespace

VertexField project_oracle(const ConstraintSet& K, const VertexField& z) {
  const WeightedGraph& g = K.graph();
  if (z.size() != g.vertex_count()) throw ValidationError("vertex field does not match the graph");
  if (g.edge_count() > max_oracle_edges) {
    throw ValidationError("projection oracle supports at most " + std::to_string(max_oracle_edges) +
                          " edges, graph has " + std::to_string(g.edge_count()));
  }
  if (is_stable(z, K)) return z;
  return Enumerator(K, z).run();
}

}  // namespace sandpile
