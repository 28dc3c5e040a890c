#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sandpile/evolution.hpp"
#include "sandpile/graph.hpp"

namespace sandpile {

/// `x.csv` -> `x.mass.csv`.
std::filesystem::path mass_path_for(const std::filesystem::path& path);

/// Writes `t,vertex,u` rows (17 significant digits) and the sibling
/// `t,residual` file. Throws ValidationError on I/O failure.
void write_trajectory(const WeightedGraph& g, const Trajectory& traj, const std::filesystem::path& path);

struct TrajectoryTable {
  /// Vertex ids in first-appearance order.
  std::vector<std::string> vertex_ids;
  Trajectory trajectory;
};

/// Reads a file written by write_trajectory; the mass file is optional.
TrajectoryTable read_trajectory(const std::filesystem::path& path);

}  // namespace sandpile
