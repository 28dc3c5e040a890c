#include "sandpile/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sandpile/errors.hpp"
#include "sandpile/evolution.hpp"
#include "sandpile/scenario.hpp"
#include "sandpile/trajectory_io.hpp"
#include "sandpile/transport.hpp"

namespace sandpile {
namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x == 0.0 ? 0.0 : x);
  return buf;
}

std::string tuple(const VertexField& u) {
  std::string s = "(";
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (i) s += ", ";
    s += fmt6(u[i]);
  }
  return s + ")";
}

std::filesystem::path output_path(const ScenarioConfig& cfg, const std::string& override_path) {
  if (!override_path.empty()) return override_path;
  if (cfg.output) return *cfg.output;
  return (cfg.name.empty() ? std::string("trajectory") : cfg.name) + ".csv";
}

std::vector<double> parse_p_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ValidationError("--p-list: bad value '" + item + "'");
    }
  }
  if (out.empty()) throw ValidationError("--p-list is empty");
  return out;
}

/// `id value` per line, `#` comments; absent vertices are 0.
VertexField load_field(const WeightedGraph& g, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open field file " + path.string());
  std::vector<std::pair<std::string, double>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string id;
    if (!(ss >> id) || id.front() == '#') continue;
    double value = 0.0;
    std::string rest;
    if (!(ss >> value) || (ss >> rest)) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": expected '<vertex> <value>'");
    }
    entries.emplace_back(id, value);
  }
  return make_field(g, entries);
}

ConstraintKind parse_kind(const std::string& kind) {
  if (kind == "uniform") return ConstraintKind::uniform;
  if (kind == "inv-sqrt-w") return ConstraintKind::inverse_sqrt_weight;
  if (kind == "inv-w") return ConstraintKind::inverse_weight;
  throw ValidationError("--kind must be uniform, inv-sqrt-w or inv-w");
}

Trajectory simulate(const ScenarioConfig& cfg) {
  const ConstraintSet K = cfg.constraints();
  switch (cfg.mode) {
    case ScenarioMode::p_flow:
      return solve_p_flow(*cfg.graph, cfg.p, K.energy_model(), cfg.u0, cfg.source, cfg.T, cfg.dt,
                          cfg.solve_options());
    case ScenarioMode::infinity_growth:
      return solve_growth(K, cfg.u0, cfg.source, cfg.T, cfg.dt, cfg.solve_options());
    case ScenarioMode::collapse:
      return solve_collapse(K, cfg.u0, cfg.dt, cfg.solve_options()).v;
  }
  return {};
}

int cmd_simulate(const std::string& scenario, const std::string& output, std::ostream& out) {
  const ScenarioConfig cfg = load_scenario(scenario);
  const Trajectory traj = simulate(cfg);
  const auto path = output_path(cfg, output);
  write_trajectory(*cfg.graph, traj, path);
  out << "mode " << scenario_mode_name(cfg.mode) << ", " << traj.size() << " samples written to " << path.string()
      << '\n';
  out << "max mass residual " << fmt17(traj.max_mass_residual()) << '\n';
  out << "events " << traj.events.size() << '\n';
  for (const ActiveSetEvent& e : traj.events) {
    out << "  t=" << fmt6(e.t) << " +" << e.activated.size() << " -" << e.released.size() << '\n';
  }
  if (!traj.empty()) out << "final t=" << fmt6(traj.times.back()) << " u=" << tuple(traj.states.back()) << '\n';
  return 0;
}

int cmd_collapse(const std::string& scenario, const std::string& output, std::ostream& out) {
  const ScenarioConfig cfg = load_scenario(scenario);
  const CollapseResult r = solve_collapse(cfg.constraints(), cfg.u0, cfg.dt, cfg.solve_options());
  if (!output.empty()) write_trajectory(*cfg.graph, r.v, output);
  out << "L = " << fmt6(r.L) << '\n';
  out << "max mass residual " << fmt17(r.v.max_mass_residual()) << '\n';
  out << "u_infinity = " << tuple(r.u_infinity) << '\n';
  return 0;
}

int cmd_converge(const std::string& scenario, const std::string& p_list, double T, const std::string& output,
                 std::ostream& out) {
  ScenarioConfig cfg = load_scenario(scenario);
  if (T > 0.0) cfg.T = T;
  const auto ps = parse_p_list(p_list);
  const auto table = converge_p_experiment(cfg.constraints(), cfg.u0, cfg.source, ps, cfg.T, cfg.dt,
                                           cfg.solve_options());
  std::ostringstream csv;
  csv << "p,sup_error\n";
  for (const PConvergenceRow& row : table) csv << fmt17(row.p) << ',' << fmt17(row.sup_error) << '\n';
  if (!output.empty()) {
    std::ofstream file(output, std::ios::binary);
    if (!file || !(file << csv.str())) throw ValidationError("cannot write " + output);
  }
  out << csv.str();
  return 0;
}

int cmd_project(const std::string& graph_path, const std::string& field_path, const std::string& kind, double tol,
                std::ostream& out) {
  const WeightedGraph g = load_graph(graph_path);
  const VertexField z = load_field(g, field_path);
  const ConstraintSet K(g, parse_kind(kind));
  ProjectionOptions options;
  options.tol = tol;
  const VertexField u = project(K, z, options);
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) out << g.id(x) << ' ' << fmt17(u[x]) << '\n';
  return 0;
}

int cmd_transport(const std::string& scenario, double t, std::ostream& out) {
  const ScenarioConfig cfg = load_scenario(scenario);
  if (cfg.mode != ScenarioMode::infinity_growth) {
    throw ValidationError("transport-check needs an infinity-growth scenario");
  }
  if (!(t > 0.0)) throw ValidationError("--t must be positive");
  const WeightedGraph& g = *cfg.graph;
  const ConstraintSet K = cfg.constraints();
  SolveOptions options = cfg.solve_options();
  options.extra_times = {t};
  const Trajectory traj = solve_growth(K, cfg.u0, cfg.source, t + cfg.dt, cfg.dt, options);
  const std::size_t n = traj.nearest(t);
  if (n + 1 >= traj.size()) throw SolverError("no step after t");
  const double h = traj.times[n + 1] - traj.times[n];
  VertexField rate(g.vertex_count());
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
    rate[x] = (traj.states[n + 1][x] - traj.states[n][x]) / h;
    if (rate[x] < 0.0 && rate[x] > -1e-9) rate[x] = 0.0;
  }
  const VertexField f = cfg.source.at(traj.times[n], g.vertex_count());
  const TransportInstance instance =
      make_transport_instance(g, DistanceTable::constraint_metric(K), rate, f);
  const VertexField& u = traj.states[n];
  const double tol = 10.0 * cfg.dt;
  const double pairing = kantorovich_pairing(g, u, instance.f0, instance.f1);
  const double cost = ot_cost_oracle(instance);
  const bool lipschitz = is_lipschitz_wrt(instance.dist, u, tol);
  const bool ok = lipschitz && pairing >= cost - tol;
  out << "t " << fmt6(traj.times[n]) << '\n';
  out << "pairing " << fmt17(pairing) << '\n';
  out << "ot_cost " << fmt17(cost) << '\n';
  out << "lipschitz " << (lipschitz ? "yes" : "no") << '\n';
  out << "potential " << (ok ? "verified" : "NOT verified") << '\n';
  return ok ? 0 : 2;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sandpile growth on weighted graphs", "sandpile"};
  app.require_subcommand(1);

  std::string scenario;
  std::string output;
  std::string p_list = "8,16,32,64";
  std::string graph_path;
  std::string field_path;
  std::string kind = "uniform";
  double tol = 1e-10;
  double t = 0.0;

  auto* simulate_cmd = app.add_subcommand("simulate", "Run a scenario and write its trajectory CSV");
  simulate_cmd->add_option("scenario", scenario, "Scenario JSON file")->required();
  simulate_cmd->add_option("-o,--output", output, "Trajectory CSV (default: scenario output field)");

  auto* collapse_cmd = app.add_subcommand("collapse", "Compute the collapsed state of an unstable datum");
  collapse_cmd->add_option("scenario", scenario, "Scenario JSON file")->required();
  collapse_cmd->add_option("-o,--output", output, "Optional CSV for the rescaled trajectory");

  auto* converge_cmd = app.add_subcommand("converge-p", "Sup-in-time error of p-flows against the limit");
  converge_cmd->add_option("scenario", scenario, "Scenario JSON file")->required();
  converge_cmd->add_option("--p-list", p_list, "Comma-separated increasing p values");
  converge_cmd->add_option("--T", t, "Final time (default: the scenario's T)");
  converge_cmd->add_option("-o,--output", output, "Also write the p,sup_error table here");

  auto* project_cmd = app.add_subcommand("project", "Project a vertex field onto a slope constraint set");
  project_cmd->add_option("graph", graph_path, "Edge-list file")->required();
  project_cmd->add_option("field", field_path, "Field file, '<vertex> <value>' per line")->required();
  project_cmd->add_option("--kind", kind, "uniform | inv-sqrt-w | inv-w");
  project_cmd->add_option("--tol", tol, "Dykstra stopping tolerance");

  auto* transport_cmd = app.add_subcommand("transport-check", "Check the Kantorovich potential property at time t");
  transport_cmd->add_option("scenario", scenario, "Scenario JSON file")->required();
  transport_cmd->add_option("--t", t, "Time at which to check")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*simulate_cmd) return cmd_simulate(scenario, output, out);
    if (*collapse_cmd) return cmd_collapse(scenario, output, out);
    if (*converge_cmd) return cmd_converge(scenario, p_list, t, output, out);
    if (*project_cmd) return cmd_project(graph_path, field_path, kind, tol, out);
    if (*transport_cmd) return cmd_transport(scenario, t, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace sandpile
