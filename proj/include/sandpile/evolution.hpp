#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sandpile/calculus.hpp"
#include "sandpile/graph.hpp"
#include "sandpile/proximal.hpp"

namespace sandpile {

struct SourceSegment {
  double t_start;
  double t_end;
  VertexField field;
};

/// Piecewise-constant source f(t, ·); zero outside every segment.
class SourceSchedule {
 public:
  SourceSchedule() = default;
  /// Segments may come in any order; they must not overlap.
  explicit SourceSchedule(std::vector<SourceSegment> segments);
  /// f(t, ·) = field for all t >= 0.
  static SourceSchedule constant(VertexField field);

  /// Field of the segment with t_start <= t < t_end, or zeros(size).
  VertexField at(double t, std::size_t size) const;
  std::span<const SourceSegment> segments() const { return segments_; }
  /// Every segment endpoint, sorted.
  std::vector<double> breakpoints() const;
  bool empty() const { return segments_.empty(); }
  bool nonnegative() const;

 private:
  std::vector<SourceSegment> segments_;
};

/// An edge constraint switched between slack and binding during a step.
struct ActiveSetEvent {
  double t;
  std::vector<std::size_t> activated;
  std::vector<std::size_t> released;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<VertexField> states;
  /// residuals[n] belongs to the step from times[n] to times[n+1].
  std::vector<double> mass_residuals;
  std::vector<ActiveSetEvent> events;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  /// Index of the sample closest to t.
  std::size_t nearest(double t) const;
  const VertexField& state_at(double t) const { return states.at(nearest(t)); }
  double max_mass_residual() const;
};

struct SolveOptions {
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  /// Additional grid points (inside (t0, T)) the run must land on.
  std::vector<double> extra_times;
};

/// Backward Euler for u_t = Δ_p u + f: u^{n+1} = resolvent_p(dt, u^n + dt f(t_n)).
Trajectory solve_p_flow(const WeightedGraph& g, double p, EnergyModel model, const VertexField& u0,
                        const SourceSchedule& f, double T, double dt, const SolveOptions& options = {});

/// Projected Euler: u^{n+1} = project(K, u^n + dt f(t_n)).
Trajectory solve_growth(const ConstraintSet& K, const VertexField& u0, const SourceSchedule& f, double T,
                        double dt, const SolveOptions& options = {});

struct CollapseResult {
  VertexField u_infinity;
  Trajectory v;
  double L = 0.0;
};

/// Rescaled collapse flow on [1/L, 1] started from v(1/L) = u0 / L.
CollapseResult solve_collapse(const ConstraintSet& K, const VertexField& u0, double dt,
                              const SolveOptions& options = {});

struct MassBalanceReport {
  std::vector<double> residuals;
  double max_abs = 0.0;
};

/// r_n = Σ (u^{n+1} - u^n) d_x - (t_{n+1} - t_n) Σ f(t_n) d_x.
MassBalanceReport mass_balance(const WeightedGraph& g, const Trajectory& traj, const SourceSchedule& f);
/// Same with f replaced by v^n / t_n.
MassBalanceReport collapse_mass_balance(const WeightedGraph& g, const Trajectory& traj);

struct PConvergenceRow {
  double p;
  double sup_error;
};

/// For each p, sup over shared samples of ‖u_p(t) - u_∞(t)‖_ν, where u_∞
/// solves the growth problem for K and u_p the p-flow of K's energy.
/// Runs one task per p.
std::vector<PConvergenceRow> converge_p_experiment(const ConstraintSet& K, const VertexField& u0,
                                                   const SourceSchedule& f, std::span<const double> p_list,
                                                   double T, double dt, const SolveOptions& options = {});

struct CollapseProbe {
  double t;
  double distance;
};

/// ‖u_p(t) - u_∞‖_ν at each probe time, for the source-free p-flow from u0.
std::vector<CollapseProbe> collapse_via_p_experiment(const ConstraintSet& K, const VertexField& u0, double p,
                                                     std::span<const double> probe_times, double dt,
                                                     const SolveOptions& options = {});

/// Time grid k·dt on [t0, T] merged with the given breakpoints.
std::vector<double> time_grid(double t0, double T, double dt, std::span<const double> breakpoints);

}  // namespace sandpile
