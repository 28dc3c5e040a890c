#include "sandpile/trajectory_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <string_view>

#include "sandpile/errors.hpp"

namespace sandpile {
namespace {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(std::string_view text, const std::filesystem::path& path, std::size_t line) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError(path.string() + ":" + std::to_string(line) + ": bad number '" + std::string(text) + "'");
  }
  return x;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::filesystem::path mass_path_for(const std::filesystem::path& path) {
  std::filesystem::path out = path;
  out.replace_extension(".mass.csv");
  return out;
}

void write_trajectory(const WeightedGraph& g, const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << "t,vertex,u\n";
  for (std::size_t n = 0; n < traj.size(); ++n) {
    const std::string t = format_number(traj.times[n]);
    for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
      out << t << ',' << g.id(x) << ',' << format_number(traj.states[n][x]) << '\n';
    }
  }
  std::ofstream mass(mass_path_for(path), std::ios::binary);
  if (!mass) throw ValidationError("cannot write " + mass_path_for(path).string());
  mass << "t,residual\n";
  for (std::size_t n = 0; n < traj.mass_residuals.size(); ++n) {
    mass << format_number(traj.times[n + 1]) << ',' << format_number(traj.mass_residuals[n]) << '\n';
  }
  if (!out || !mass) throw ValidationError("write failed for " + path.string());
}

TrajectoryTable read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "t,vertex,u") {
    throw ValidationError(path.string() + ": expected header t,vertex,u");
  }
  TrajectoryTable table;
  std::map<std::string, std::size_t, std::less<>> column;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 3) throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": expected 3 fields");
    const double t = parse_number(cells[0], path, line_no);
    const double u = parse_number(cells[2], path, line_no);
    auto it = column.find(cells[1]);
    if (it == column.end()) {
      if (!table.trajectory.times.empty() && rows.size() > 1) {
        throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": new vertex after first sample");
      }
      it = column.emplace(std::string(cells[1]), table.vertex_ids.size()).first;
      table.vertex_ids.emplace_back(cells[1]);
    }
    if (table.trajectory.times.empty() || table.trajectory.times.back() != t) {
      table.trajectory.times.push_back(t);
      rows.emplace_back();
    }
    auto& row = rows.back();
    if (row.size() <= it->second) row.resize(it->second + 1);
    row[it->second] = u;
  }
  for (auto& row : rows) {
    if (row.size() != table.vertex_ids.size()) throw ValidationError(path.string() + ": ragged sample");
    table.trajectory.states.emplace_back(std::move(row));
  }

  std::ifstream mass(mass_path_for(path), std::ios::binary);
  if (mass) {
    if (!std::getline(mass, line) || line != "t,residual") {
      throw ValidationError(mass_path_for(path).string() + ": expected header t,residual");
    }
    line_no = 1;
    while (std::getline(mass, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto cells = split(line);
      if (cells.size() != 2) throw ValidationError(mass_path_for(path).string() + ": expected 2 fields");
      table.trajectory.mass_residuals.push_back(parse_number(cells[1], mass_path_for(path), line_no));
    }
  }
  return table;
}

}  // namespace sandpile
