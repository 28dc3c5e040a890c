#include "sandpile/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "sandpile/errors.hpp"

namespace sandpile {
namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ValidationError(path + ": " + message);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing required field");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "expected a finite number");
  return x;
}

double positive(const json& v, const std::string& path) {
  const double x = number(v, path);
  if (!(x > 0.0)) fail(path, "must be positive");
  return x;
}

std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) fail(path + "." + key, "unknown field");
  }
}

std::shared_ptr<const WeightedGraph> parse_graph(const json& spec, const std::filesystem::path& base_dir) {
  const std::string path = "graph";
  if (!spec.is_object()) fail(path, "expected an object");
  check_keys(spec, {"generator", "n", "weight", "weights", "radius", "edges", "file", "weight_bound", "guard_band"},
             path);
  GraphOptions options;
  if (spec.contains("weight_bound")) options.weight_bound = positive(spec["weight_bound"], path + ".weight_bound");
  if (spec.contains("guard_band")) {
    const json& band = spec["guard_band"];
    if (!band.is_array()) fail(path + ".guard_band", "expected an array of vertex ids");
    for (std::size_t i = 0; i < band.size(); ++i) {
      options.guard_band.push_back(string(band[i], path + ".guard_band[" + std::to_string(i) + "]"));
    }
  }
  const int sources = static_cast<int>(spec.contains("generator")) + static_cast<int>(spec.contains("edges")) +
                      static_cast<int>(spec.contains("file"));
  if (sources != 1) fail(path, "give exactly one of 'generator', 'edges', 'file'");

  if (spec.contains("generator")) {
    const std::string kind = string(spec["generator"], path + ".generator");
    if (kind == "path") {
      const double n = number(require(spec, "n", path), path + ".n");
      if (n < 2 || n != std::floor(n)) fail(path + ".n", "must be an integer >= 2");
      const double w = spec.contains("weight") ? positive(spec["weight"], path + ".weight") : 1.0;
      return std::make_shared<const WeightedGraph>(build_path(static_cast<std::size_t>(n), w));
    }
    if (kind == "star") {
      const json& ws = require(spec, "weights", path);
      if (!ws.is_array() || ws.empty()) fail(path + ".weights", "expected a nonempty array");
      std::vector<double> weights;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        weights.push_back(positive(ws[i], path + ".weights[" + std::to_string(i) + "]"));
      }
      return std::make_shared<const WeightedGraph>(build_star(weights));
    }
    if (kind == "truncated_z") {
      const double r = number(require(spec, "radius", path), path + ".radius");
      if (r < 1 || r != std::floor(r) || r > 1e6) fail(path + ".radius", "must be an integer >= 1");
      return std::make_shared<const WeightedGraph>(build_truncated_z(static_cast<int>(r)));
    }
    fail(path + ".generator", "unknown generator '" + kind + "' (path, star, truncated_z)");
  }
  if (spec.contains("file")) {
    std::filesystem::path file = string(spec["file"], path + ".file");
    if (file.is_relative()) file = base_dir / file;
    return std::make_shared<const WeightedGraph>(load_graph(file, options));
  }
  const json& edges = spec["edges"];
  if (!edges.is_array()) fail(path + ".edges", "expected an array of [a, b, weight]");
  std::vector<EdgeSpec> list;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string at = path + ".edges[" + std::to_string(i) + "]";
    const json& e = edges[i];
    if (!e.is_array() || e.size() != 3) fail(at, "expected [a, b, weight]");
    list.push_back({string(e[0], at + "[0]"), string(e[1], at + "[1]"), number(e[2], at + "[2]")});
  }
  return std::make_shared<const WeightedGraph>(build_graph(list, options));
}

VertexField parse_field(const json& spec, const WeightedGraph& g, const std::string& path) {
  if (!spec.is_object()) fail(path, "expected an object of vertex: value");
  VertexField u = g.zeros();
  for (const auto& [id, value] : spec.items()) {
    const auto v = g.find(id);
    if (!v) fail(path + "." + id, "unknown vertex");
    u[*v] = number(value, path + "." + id);
  }
  return u;
}

SourceSchedule parse_source(const json& spec, const WeightedGraph& g) {
  const std::string path = "source";
  if (!spec.is_array()) fail(path, "expected an array of segments");
  std::vector<SourceSegment> segments;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    const json& s = spec[i];
    if (!s.is_object()) fail(at, "expected an object");
    check_keys(s, {"t_start", "t_end", "values"}, at);
    const double t0 = s.contains("t_start") ? number(s["t_start"], at + ".t_start") : 0.0;
    const double t1 = s.contains("t_end") ? number(s["t_end"], at + ".t_end") : std::numeric_limits<double>::infinity();
    if (!(t0 < t1)) fail(at, "t_start must be below t_end");
    segments.push_back({t0, t1, parse_field(require(s, "values", at), g, at + ".values")});
  }
  try {
    return SourceSchedule(std::move(segments));
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
}

ConstraintKind parse_constraint(const json& spec, const WeightedGraph& g, std::vector<double>& custom) {
  const std::string path = "constraint";
  if (spec.is_string()) {
    const std::string kind = spec.get<std::string>();
    if (kind == "uniform") return ConstraintKind::uniform;
    if (kind == "inv-sqrt-w") return ConstraintKind::inverse_sqrt_weight;
    if (kind == "inv-w") return ConstraintKind::inverse_weight;
    fail(path, "unknown kind '" + kind + "' (uniform, inv-sqrt-w, inv-w, or {\"custom\": [...]})");
  }
  if (!spec.is_object()) fail(path, "expected a string or an object");
  check_keys(spec, {"custom"}, path);
  const json& table = require(spec, "custom", path);
  if (!table.is_array()) fail(path + ".custom", "expected an array of [a, b, bound]");
  custom.assign(g.edge_count(), 0.0);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::string at = path + ".custom[" + std::to_string(i) + "]";
    const json& e = table[i];
    if (!e.is_array() || e.size() != 3) fail(at, "expected [a, b, bound]");
    const auto a = g.find(string(e[0], at + "[0]"));
    const auto b = g.find(string(e[1], at + "[1]"));
    if (!a || !b) fail(at, "unknown vertex");
    const auto edge = g.edge_between(*a, *b);
    if (!edge) fail(at, "vertices are not adjacent");
    custom[*edge] = positive(e[2], at + "[2]");
  }
  for (std::size_t e = 0; e < custom.size(); ++e) {
    if (custom[e] == 0.0) {
      fail(path + ".custom", "no bound for edge " + g.id(g.edges()[e].tail) + "-" + g.id(g.edges()[e].head));
    }
  }
  return ConstraintKind::custom;
}

}  // namespace

std::string_view scenario_mode_name(ScenarioMode mode) {
  switch (mode) {
    case ScenarioMode::p_flow:
      return "p-flow";
    case ScenarioMode::infinity_growth:
      return "infinity-growth";
    case ScenarioMode::collapse:
      return "collapse";
  }
  return "unknown";
}

ConstraintSet ScenarioConfig::constraints() const {
  if (constraint_kind == ConstraintKind::custom) return ConstraintSet(*graph, custom_bounds);
  return ConstraintSet(*graph, constraint_kind);
}

SolveOptions ScenarioConfig::solve_options() const {
  SolveOptions options;
  options.tol = tol;
  return options;
}

ScenarioConfig parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("scenario", "expected an object at the top level");
  check_keys(doc, {"name", "description", "graph", "constraint", "model", "u0", "source", "T", "dt", "tol",
                   "output", "runtime_budget_s"},
             "scenario");

  ScenarioConfig cfg;
  if (doc.contains("name")) cfg.name = string(doc["name"], "name");
  cfg.graph = parse_graph(require(doc, "graph", "scenario"), base_dir);
  const WeightedGraph& g = *cfg.graph;

  if (doc.contains("constraint")) cfg.constraint_kind = parse_constraint(doc["constraint"], g, cfg.custom_bounds);

  const json& model = require(doc, "model", "scenario");
  if (!model.is_object()) fail("model", "expected an object");
  check_keys(model, {"kind", "p"}, "model");
  const std::string kind = string(require(model, "kind", "model"), "model.kind");
  if (kind == "p-flow") {
    cfg.mode = ScenarioMode::p_flow;
    cfg.p = number(require(model, "p", "model"), "model.p");
    if (cfg.p < 2.0) fail("model.p", "must be >= 2");
    if (cfg.constraint_kind == ConstraintKind::custom) fail("constraint", "p-flow needs a named constraint kind");
  } else if (kind == "infinity-growth") {
    cfg.mode = ScenarioMode::infinity_growth;
  } else if (kind == "collapse") {
    cfg.mode = ScenarioMode::collapse;
  } else {
    fail("model.kind", "unknown kind '" + kind + "' (p-flow, infinity-growth, collapse)");
  }

  cfg.u0 = doc.contains("u0") ? parse_field(doc["u0"], g, "u0") : g.zeros();
  if (doc.contains("source")) cfg.source = parse_source(doc["source"], g);
  if (doc.contains("dt")) cfg.dt = positive(doc["dt"], "dt");
  if (doc.contains("tol")) cfg.tol = positive(doc["tol"], "tol");
  if (doc.contains("T")) {
    cfg.T = positive(doc["T"], "T");
  } else if (cfg.mode == ScenarioMode::collapse) {
    cfg.T = 1.0;
  } else {
    fail("scenario.T", "missing required field");
  }
  if (doc.contains("output")) cfg.output = string(doc["output"], "output");
  if (doc.contains("runtime_budget_s")) cfg.runtime_budget_s = positive(doc["runtime_budget_s"], "runtime_budget_s");

  if (cfg.mode == ScenarioMode::infinity_growth && !is_stable(cfg.u0, cfg.constraints(), cfg.tol)) {
    fail("u0", "initial datum not stable");
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  ScenarioConfig cfg = parse_scenario(text.str(), path.parent_path());
  if (cfg.name.empty()) cfg.name = path.stem().string();
  return cfg;
}

}  // namespace sandpile
