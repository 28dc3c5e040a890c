#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "sandpile/errors.hpp"
#include "sandpile/proximal.hpp"

namespace sandpile {
namespace {

constexpr double tiny = 1e-300;

class Objective {
 public:
  Objective(const WeightedGraph& g, double p, EnergyModel model, double lambda, const VertexField& z)
      : g_(g), p_(p), model_(model), lambda_(lambda), z_(z) {}

  double value(const VertexField& v) const {
    double fit = 0.0;
    for (VertexIndex x = 0; x < g_.vertex_count(); ++x) {
      const double d = v[x] - z_[x];
      fit += g_.degree(x) * d * d;
    }
    const double phi = 0.5 * fit + lambda_ * energy_Jp(g_, v, p_, model_);
    if (!std::isfinite(phi)) throw SolverError("resolvent objective is not finite");
    return phi;
  }

  /// Gradient and the lower triangle of the Hessian (without the ridge).
  /// Every edge contributes an entry, so the sparsity pattern is fixed.
  void derivatives(const VertexField& v, Eigen::VectorXd& grad, std::vector<Eigen::Triplet<double>>& h) const {
    const std::size_t n = g_.vertex_count();
    grad.resize(static_cast<Eigen::Index>(n));
    h.clear();
    std::vector<double> diag(n);
    for (VertexIndex x = 0; x < n; ++x) {
      grad[static_cast<Eigen::Index>(x)] = g_.degree(x) * (v[x] - z_[x]);
      diag[x] = g_.degree(x);
    }
    for (const Edge& e : g_.edges()) {
      const double gap = v[e.head] - v[e.tail];
      const double flux = edge_flux(gap, e.weight, p_, model_);
      grad[static_cast<Eigen::Index>(e.head)] += lambda_ * flux;
      grad[static_cast<Eigen::Index>(e.tail)] -= lambda_ * flux;
      const double curvature = lambda_ * (p_ - 1.0) * edge_curvature(gap, e.weight);
      diag[e.head] += curvature;
      diag[e.tail] += curvature;
      h.emplace_back(static_cast<int>(std::max(e.head, e.tail)), static_cast<int>(std::min(e.head, e.tail)),
                     -curvature);
    }
    for (VertexIndex x = 0; x < n; ++x) h.emplace_back(static_cast<int>(x), static_cast<int>(x), diag[x]);
  }

 private:
  // w · s^{p-2}, the edge Hessian without its (p-1) factor.
  double edge_curvature(double gap, double weight) const {
    if (p_ == 2.0) return weight;
    const double magnitude = std::abs(gap);
    if (magnitude < tiny) return 0.0;
    const double c = model_slope_bound(model_, weight);
    const double r = std::exp(std::log(weight) + (p_ - 2.0) * (std::log(magnitude) - std::log(c)));
    if (!std::isfinite(r)) throw SolverError("resolvent Hessian overflow");
    return r;
  }

  const WeightedGraph& g_;
  double p_;
  EnergyModel model_;
  double lambda_;
  const VertexField& z_;
};

double scaled_norm(const WeightedGraph& g, const Eigen::VectorXd& grad) {
  // ‖grad / d‖_ν = sqrt(Σ grad² / d).
  double s = 0.0;
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
    const double r = grad[static_cast<Eigen::Index>(x)];
    s += r * r / g.degree(x);
  }
  return std::sqrt(s);
}

}  // namespace

VertexField resolvent_p(const WeightedGraph& g, double p, EnergyModel model, double lambda,
                        const VertexField& z, const ResolventOptions& options, ResolventStats* stats) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw ValidationError("p must be a finite real >= 2");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be finite and >= 0");
  if (z.size() != g.vertex_count()) throw ValidationError("vertex field does not match the graph");
  if (stats) *stats = {};
  if (lambda == 0.0) return z;

  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  const Objective phi(g, p, model, lambda, z);
  VertexField v = z;
  double value = phi.value(v);
  Eigen::VectorXd grad;
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::SparseMatrix<double> hessian(n, n);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower> solver;
  bool analysed = false;

  for (std::size_t it = 0; it <= options.max_iter; ++it) {
    phi.derivatives(v, grad, triplets);
    const double norm = scaled_norm(g, grad);
    if (stats) {
      stats->iterations = it;
      stats->gradient_norm = norm;
    }
    if (norm <= options.tol) return v;
    if (it == options.max_iter) break;

    double max_diag = 0.0;
    for (const auto& t : triplets) {
      if (t.row() == t.col()) max_diag = std::max(max_diag, t.value());
    }
    // Ridge proportional to d_x keeps Σ d_x δ_x = 0, hence exact mass.
    const double ridge = 1e-12 * (1.0 + max_diag);
    for (auto& t : triplets) {
      if (t.row() == t.col()) t = {t.row(), t.col(), t.value() + ridge * g.degree(static_cast<VertexIndex>(t.row()))};
    }
    hessian.setFromTriplets(triplets.begin(), triplets.end());
    if (!analysed) {
      solver.analyzePattern(hessian);
      analysed = true;
    }
    solver.factorize(hessian);
    if (solver.info() != Eigen::Success) throw SolverError("resolvent Newton system is singular");
    const Eigen::VectorXd step = solver.solve(-grad);

    const double slope = grad.dot(step);
    double alpha = 1.0;
    VertexField trial(g.vertex_count());
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      for (Eigen::Index x = 0; x < n; ++x) trial[static_cast<VertexIndex>(x)] = v[static_cast<VertexIndex>(x)] + alpha * step[x];
      double trial_value;
      try {
        trial_value = phi.value(trial);
      } catch (const SolverError&) {
        alpha *= 0.5;
        continue;
      }
      if (trial_value <= value + 1e-4 * alpha * slope) {
        value = trial_value;
        accepted = true;
        break;
      }
      // Near the optimum the predicted decrease drops below rounding in Φ.
      if (k == 0 && -slope <= 1e-14 * (1.0 + std::abs(value)) &&
          trial_value <= value + 1e-14 * (1.0 + std::abs(value))) {
        value = trial_value;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "resolvent line search failed at iteration " << it << " (gradient norm " << norm
          << ", directional derivative " << slope << ", objective " << value << ")";
      throw SolverError(msg.str());
    }
    v = trial;
  }
  std::ostringstream msg;
  msg << "resolvent did not converge within " << options.max_iter << " Newton iterations (gradient norm "
      << (stats ? stats->gradient_norm : scaled_norm(g, grad)) << ")";
  throw SolverError(msg.str());
}

}  // namespace sandpile
