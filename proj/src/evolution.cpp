#include "sandpile/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <string>

#include "sandpile/errors.hpp"
#include "sandpile/kernels.hpp"

namespace sandpile {
namespace {

void check_time_args(double T, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("T must be positive");
}

void check_finite(const VertexField& u, const char* what) {
  for (double x : u) {
    if (!std::isfinite(x)) throw ValidationError(std::string(what) + " has a non-finite value");
  }
}

/// Throws unless every guard-band vertex still carries its initial value.
void check_guard_band(const WeightedGraph& g, const VertexField& u0, const VertexField& u, double tol, double t) {
  for (VertexIndex x : g.guard_band()) {
    if (std::abs(u[x] - u0[x]) > tol) {
      throw SolverError("truncation too small: vertex " + g.id(x) + " changed at t = " + std::to_string(t));
    }
  }
}

std::vector<std::size_t> set_difference(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

class EventTracker {
 public:
  EventTracker(const ConstraintSet& K, const VertexField& u0, double slack)
      : K_(K), slack_(slack), active_(active_edges(u0, K, slack)) {}

  void observe(double t, const VertexField& u, std::vector<ActiveSetEvent>& events) {
    auto now = active_edges(u, K_, slack_);
    if (now != active_) {
      events.push_back({t, set_difference(now, active_), set_difference(active_, now)});
      active_ = std::move(now);
    }
  }

 private:
  const ConstraintSet& K_;
  double slack_;
  std::vector<std::size_t> active_;
};

double mass_of(const WeightedGraph& g, const VertexField& u) {
  return kernels::weighted_sum(u.values(), g.degrees());
}

}  // namespace

SourceSchedule::SourceSchedule(std::vector<SourceSegment> segments) : segments_(std::move(segments)) {
  std::sort(segments_.begin(), segments_.end(),
            [](const SourceSegment& a, const SourceSegment& b) { return a.t_start < b.t_start; });
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const SourceSegment& s = segments_[i];
    if (!(s.t_start < s.t_end)) throw ValidationError("source segment must have t_start < t_end");
    check_finite(s.field, "source segment");
    if (i > 0 && s.t_start < segments_[i - 1].t_end) throw ValidationError("source segments overlap");
    if (i > 0 && s.field.size() != segments_[0].field.size()) {
      throw ValidationError("source segments have different sizes");
    }
  }
}

SourceSchedule SourceSchedule::constant(VertexField field) {
  return SourceSchedule({{0.0, std::numeric_limits<double>::infinity(), std::move(field)}});
}

VertexField SourceSchedule::at(double t, std::size_t size) const {
  for (const SourceSegment& s : segments_) {
    if (s.t_start <= t && t < s.t_end) {
      if (s.field.size() != size) throw ValidationError("source field does not match the graph");
      return s.field;
    }
  }
  return VertexField(size);
}

std::vector<double> SourceSchedule::breakpoints() const {
  std::vector<double> out;
  for (const SourceSegment& s : segments_) {
    out.push_back(s.t_start);
    if (std::isfinite(s.t_end)) out.push_back(s.t_end);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool SourceSchedule::nonnegative() const {
  for (const SourceSegment& s : segments_) {
    for (double x : s.field) {
      if (x < 0.0) return false;
    }
  }
  return true;
}

std::size_t Trajectory::nearest(double t) const {
  if (times.empty()) throw ValidationError("trajectory is empty");
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 0;
  if (it == times.end()) return times.size() - 1;
  const auto i = static_cast<std::size_t>(it - times.begin());
  return (times[i] - t < t - times[i - 1]) ? i : i - 1;
}

double Trajectory::max_mass_residual() const {
  double m = 0.0;
  for (double r : mass_residuals) m = std::max(m, std::abs(r));
  return m;
}

std::vector<double> time_grid(double t0, double T, double dt, std::span<const double> breakpoints) {
  if (!(T > t0)) throw ValidationError("final time must exceed the initial time");
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  const double merge = 1e-6 * dt;
  std::vector<double> special;
  for (double b : breakpoints) {
    if (b > t0 + merge && b < T - merge) special.push_back(b);
  }
  special.push_back(T);
  std::sort(special.begin(), special.end());

  std::vector<double> grid{t0};
  std::size_t next = 0;
  for (std::size_t k = 1;; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    while (next < special.size() && special[next] <= t + merge) {
      if (special[next] > grid.back() + merge) grid.push_back(special[next]);
      ++next;
    }
    if (next == special.size()) break;
    if (t > grid.back() + merge) grid.push_back(t);
  }
  return grid;
}

Trajectory solve_p_flow(const WeightedGraph& g, double p, EnergyModel model, const VertexField& u0,
                        const SourceSchedule& f, double T, double dt, const SolveOptions& options) {
  check_time_args(T, dt);
  if (u0.size() != g.vertex_count()) throw ValidationError("initial datum does not match the graph");
  check_finite(u0, "initial datum");
  auto breaks = f.breakpoints();
  breaks.insert(breaks.end(), options.extra_times.begin(), options.extra_times.end());
  const std::vector<double> grid = time_grid(0.0, T, dt, breaks);

  Trajectory traj;
  traj.times.reserve(grid.size());
  traj.states.reserve(grid.size());
  traj.times.push_back(grid[0]);
  traj.states.push_back(u0);
  ResolventOptions ropts;
  ropts.tol = options.tol;
  VertexField z(g.vertex_count());
  for (std::size_t n = 0; n + 1 < grid.size(); ++n) {
    const double h = grid[n + 1] - grid[n];
    const VertexField& u = traj.states.back();
    const VertexField source = f.at(grid[n], g.vertex_count());
    kernels::axpy(u.values(), h, source.values(), z.values());
    VertexField next = resolvent_p(g, p, model, h, z, ropts);
    check_guard_band(g, u0, next, 1e-12, grid[n + 1]);
    traj.mass_residuals.push_back(mass_of(g, next) - mass_of(g, u) - h * mass_of(g, source));
    traj.times.push_back(grid[n + 1]);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

Trajectory solve_growth(const ConstraintSet& K, const VertexField& u0, const SourceSchedule& f, double T,
                        double dt, const SolveOptions& options) {
  const WeightedGraph& g = K.graph();
  check_time_args(T, dt);
  if (u0.size() != g.vertex_count()) throw ValidationError("initial datum does not match the graph");
  check_finite(u0, "initial datum");
  if (!is_stable(u0, K, options.tol)) throw ValidationError("initial datum not stable");
  auto breaks = f.breakpoints();
  breaks.insert(breaks.end(), options.extra_times.begin(), options.extra_times.end());
  const std::vector<double> grid = time_grid(0.0, T, dt, breaks);

  Trajectory traj;
  traj.times.reserve(grid.size());
  traj.states.reserve(grid.size());
  traj.times.push_back(grid[0]);
  traj.states.push_back(u0);
  const ProjectionOptions popts{options.tol, options.max_iter};
  EventTracker events(K, u0, 10.0 * options.tol);
  VertexField z(g.vertex_count());
  for (std::size_t n = 0; n + 1 < grid.size(); ++n) {
    const double h = grid[n + 1] - grid[n];
    const VertexField& u = traj.states.back();
    const VertexField source = f.at(grid[n], g.vertex_count());
    kernels::axpy(u.values(), h, source.values(), z.values());
    VertexField next = project(K, z, popts);
    check_guard_band(g, u0, next, 0.0, grid[n + 1]);
    traj.mass_residuals.push_back(mass_of(g, next) - mass_of(g, u) - h * mass_of(g, source));
    events.observe(grid[n + 1], next, traj.events);
    traj.times.push_back(grid[n + 1]);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

CollapseResult solve_collapse(const ConstraintSet& K, const VertexField& u0, double dt,
                              const SolveOptions& options) {
  const WeightedGraph& g = K.graph();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  if (u0.size() != g.vertex_count()) throw ValidationError("initial datum does not match the graph");
  check_finite(u0, "initial datum");
  CollapseResult result;
  result.L = max_relative_slope(u0, K);
  if (result.L <= 1.0) {
    result.u_infinity = u0;
    return result;
  }
  const double tau = 1.0 / result.L;
  const std::vector<double> grid = time_grid(tau, 1.0, dt, options.extra_times);
  Trajectory& traj = result.v;
  traj.times.reserve(grid.size());
  traj.states.reserve(grid.size());
  VertexField v0(g.vertex_count());
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) v0[x] = tau * u0[x];
  traj.times.push_back(tau);
  traj.states.push_back(v0);
  const ProjectionOptions popts{options.tol, options.max_iter};
  EventTracker events(K, v0, 10.0 * options.tol);
  VertexField z(g.vertex_count());
  for (std::size_t n = 0; n + 1 < grid.size(); ++n) {
    const double h = grid[n + 1] - grid[n];
    const VertexField& v = traj.states.back();
    kernels::axpy(v.values(), h / grid[n], v.values(), z.values());
    VertexField next = project(K, z, popts);
    check_guard_band(g, v0, next, 0.0, grid[n + 1]);
    const double before = mass_of(g, v);
    traj.mass_residuals.push_back(mass_of(g, next) - before - h * before / grid[n]);
    events.observe(grid[n + 1], next, traj.events);
    traj.times.push_back(grid[n + 1]);
    traj.states.push_back(std::move(next));
  }
  result.u_infinity = traj.states.back();
  return result;
}

MassBalanceReport mass_balance(const WeightedGraph& g, const Trajectory& traj, const SourceSchedule& f) {
  MassBalanceReport report;
  for (std::size_t n = 0; n + 1 < traj.size(); ++n) {
    const double h = traj.times[n + 1] - traj.times[n];
    const VertexField source = f.at(traj.times[n], g.vertex_count());
    const double r = mass_of(g, traj.states[n + 1]) - mass_of(g, traj.states[n]) - h * mass_of(g, source);
    report.residuals.push_back(r);
    report.max_abs = std::max(report.max_abs, std::abs(r));
  }
  return report;
}

MassBalanceReport collapse_mass_balance(const WeightedGraph& g, const Trajectory& traj) {
  MassBalanceReport report;
  for (std::size_t n = 0; n + 1 < traj.size(); ++n) {
    const double h = traj.times[n + 1] - traj.times[n];
    const double before = mass_of(g, traj.states[n]);
    const double r = mass_of(g, traj.states[n + 1]) - before - h * before / traj.times[n];
    report.residuals.push_back(r);
    report.max_abs = std::max(report.max_abs, std::abs(r));
  }
  return report;
}

}  // namespace sandpile
