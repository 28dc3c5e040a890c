#include <algorithm>
#include <cmath>
#include <future>

#include "sandpile/errors.hpp"
#include "sandpile/evolution.hpp"

namespace sandpile {

std::vector<PConvergenceRow> converge_p_experiment(const ConstraintSet& K, const VertexField& u0,
                                                   const SourceSchedule& f, std::span<const double> p_list,
                                                   double T, double dt, const SolveOptions& options) {
  for (std::size_t i = 1; i < p_list.size(); ++i) {
    if (!(p_list[i] > p_list[i - 1])) throw ValidationError("p list must be strictly increasing");
  }
  const WeightedGraph& g = K.graph();
  const EnergyModel model = K.energy_model();
  const Trajectory limit = solve_growth(K, u0, f, T, dt, options);

  std::vector<std::future<double>> runs;
  runs.reserve(p_list.size());
  for (double p : p_list) {
    runs.push_back(std::async(std::launch::async, [&, p] {
      const Trajectory flow = solve_p_flow(g, p, model, u0, f, T, dt, options);
      if (flow.size() != limit.size()) throw SolverError("p-flow and growth grids differ");
      double sup = 0.0;
      for (std::size_t n = 0; n < flow.size(); ++n) {
        sup = std::max(sup, distance_nu(g, flow.states[n], limit.states[n]));
      }
      return sup;
    }));
  }
  std::vector<PConvergenceRow> table;
  table.reserve(p_list.size());
  for (std::size_t i = 0; i < p_list.size(); ++i) table.push_back({p_list[i], runs[i].get()});
  return table;
}

std::vector<CollapseProbe> collapse_via_p_experiment(const ConstraintSet& K, const VertexField& u0, double p,
                                                     std::span<const double> probe_times, double dt,
                                                     const SolveOptions& options) {
  if (probe_times.empty()) return {};
  const WeightedGraph& g = K.graph();
  const CollapseResult collapse = solve_collapse(K, u0, dt, options);
  const double T = *std::max_element(probe_times.begin(), probe_times.end());
  SolveOptions flow_options = options;
  flow_options.extra_times.assign(probe_times.begin(), probe_times.end());
  const Trajectory flow = solve_p_flow(g, p, K.energy_model(), u0, SourceSchedule{}, T, dt, flow_options);
  std::vector<CollapseProbe> table;
  for (double t : probe_times) {
    table.push_back({t, distance_nu(g, flow.state_at(t), collapse.u_infinity)});
  }
  return table;
}

}  // namespace sandpile
