#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sandpile/evolution.hpp"
#include "sandpile/graph.hpp"
#include "sandpile/proximal.hpp"

namespace sandpile {

enum class ScenarioMode { p_flow, infinity_growth, collapse };

std::string_view scenario_mode_name(ScenarioMode mode);

/// A validated scenario document. See README.md for the schema.
struct ScenarioConfig {
  std::string name;
  std::shared_ptr<const WeightedGraph> graph;
  ConstraintKind constraint_kind = ConstraintKind::uniform;
  /// Only for ConstraintKind::custom, indexed like graph->edges().
  std::vector<double> custom_bounds;
  ScenarioMode mode = ScenarioMode::infinity_growth;
  double p = 0.0;
  VertexField u0;
  SourceSchedule source;
  double T = 0.0;
  double dt = 1e-3;
  double tol = 1e-10;
  std::optional<std::string> output;
  std::optional<double> runtime_budget_s;

  ConstraintSet constraints() const;
  SolveOptions solve_options() const;
};

/// Parses a JSON scenario. Relative graph file paths resolve against base_dir.
/// Errors are ValidationError with a field path, e.g. "model.p: expected a number".
ScenarioConfig parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);

}  // namespace sandpile
