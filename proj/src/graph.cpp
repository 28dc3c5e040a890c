#include "sandpile/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include "sandpile/errors.hpp"
#include "sandpile/kernels.hpp"

namespace sandpile {
namespace {

void validate_id(const std::string& id) {
  if (id.empty()) throw ValidationError("empty vertex id");
  for (char c : id) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      throw ValidationError("vertex id '" + id + "' contains whitespace or ','");
    }
  }
  if (id.front() == '#') throw ValidationError("vertex id '" + id + "' starts with '#'");
}

void check_same_size(const WeightedGraph& g, const VertexField& u) {
  if (u.size() != g.vertex_count()) {
    throw ValidationError("vertex field has " + std::to_string(u.size()) +
                          " values, graph has " + std::to_string(g.vertex_count()) + " vertices");
  }
}

void check_index(const WeightedGraph& g, VertexIndex v) {
  if (v >= g.vertex_count()) throw ValidationError("unknown vertex index " + std::to_string(v));
}

}  // namespace

std::optional<VertexIndex> WeightedGraph::find(std::string_view id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VertexIndex WeightedGraph::index_of(std::string_view id) const {
  if (auto v = find(id)) return *v;
  throw ValidationError("unknown vertex '" + std::string(id) + "'");
}

std::span<const Incidence> WeightedGraph::neighbors(VertexIndex v) const {
  return std::span<const Incidence>(adjacency_).subspan(
      adjacency_offsets_[v], adjacency_offsets_[v + 1] - adjacency_offsets_[v]);
}

std::optional<std::size_t> WeightedGraph::edge_between(VertexIndex x, VertexIndex y) const {
  for (const Incidence& inc : neighbors(x)) {
    if (inc.neighbor == y) return inc.edge;
  }
  return std::nullopt;
}

double WeightedGraph::weight(VertexIndex x, VertexIndex y) const {
  if (auto e = edge_between(x, y)) return edges_[*e].weight;
  return 0.0;
}

WeightedGraph build_graph(std::span<const EdgeSpec> edges, const GraphOptions& options) {
  if (edges.empty()) throw ValidationError("graph has no edges");

  WeightedGraph g;
  std::set<std::string, std::less<>> ids;
  for (const EdgeSpec& e : edges) {
    validate_id(e.a);
    validate_id(e.b);
    if (e.a == e.b) throw ValidationError("self-loop at vertex '" + e.a + "'");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw ValidationError("edge (" + e.a + ", " + e.b + ") has nonpositive weight");
    }
    ids.insert(e.a);
    ids.insert(e.b);
  }
  g.ids_.assign(ids.begin(), ids.end());
  for (VertexIndex i = 0; i < g.ids_.size(); ++i) g.index_.emplace(g.ids_[i], i);

  const std::size_t n = g.ids_.size();
  for (const EdgeSpec& e : edges) {
    VertexIndex a = g.index_.find(e.a)->second;
    VertexIndex b = g.index_.find(e.b)->second;
    if (a > b) std::swap(a, b);
    g.edges_.push_back({a, b, e.weight});
  }
  std::sort(g.edges_.begin(), g.edges_.end(), [](const Edge& l, const Edge& r) {
    return std::pair(l.tail, l.head) < std::pair(r.tail, r.head);
  });
  for (std::size_t i = 1; i < g.edges_.size(); ++i) {
    if (g.edges_[i].tail == g.edges_[i - 1].tail && g.edges_[i].head == g.edges_[i - 1].head) {
      throw ValidationError("duplicate edge (" + g.ids_[g.edges_[i].tail] + ", " +
                            g.ids_[g.edges_[i].head] + ")");
    }
  }
  if (g.edges_.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()) ||
      n > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw ValidationError("graph too large");
  }

  g.degrees_.assign(n, 0.0);
  std::vector<std::size_t> counts(n, 0);
  for (const Edge& e : g.edges_) {
    g.degrees_[e.tail] += e.weight;
    g.degrees_[e.head] += e.weight;
    ++counts[e.tail];
    ++counts[e.head];
    g.tails_.push_back(static_cast<std::int32_t>(e.tail));
    g.heads_.push_back(static_cast<std::int32_t>(e.head));
    g.max_weight_ = std::max(g.max_weight_, e.weight);
  }
  g.adjacency_offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.adjacency_offsets_[v + 1] = g.adjacency_offsets_[v] + counts[v];
  g.adjacency_.resize(g.adjacency_offsets_[n]);
  std::vector<std::size_t> fill(g.adjacency_offsets_.begin(), g.adjacency_offsets_.end() - 1);
  for (std::size_t i = 0; i < g.edges_.size(); ++i) {
    const Edge& e = g.edges_[i];
    g.adjacency_[fill[e.tail]++] = {e.head, i};
    g.adjacency_[fill[e.head]++] = {e.tail, i};
  }

  // Connectivity.
  std::vector<bool> seen(n, false);
  std::vector<VertexIndex> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const VertexIndex v = stack.back();
    stack.pop_back();
    for (const Incidence& inc : g.neighbors(v)) {
      if (!seen[inc.neighbor]) {
        seen[inc.neighbor] = true;
        ++reached;
        stack.push_back(inc.neighbor);
      }
    }
  }
  if (reached != n) throw ValidationError("graph is disconnected");

  if (options.weight_bound) {
    if (!(*options.weight_bound > 0.0)) throw ValidationError("weight bound must be positive");
    if (g.max_weight_ > *options.weight_bound) {
      throw ValidationError("edge weight exceeds the declared bound");
    }
    g.weight_bound_ = options.weight_bound;
  }
  for (const std::string& id : options.guard_band) g.guard_band_.push_back(g.index_of(id));
  std::sort(g.guard_band_.begin(), g.guard_band_.end());
  g.guard_band_.erase(std::unique(g.guard_band_.begin(), g.guard_band_.end()), g.guard_band_.end());
  return g;
}

WeightedGraph parse_edge_list(std::string_view text, const GraphOptions& options) {
  std::vector<EdgeSpec> edges;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    EdgeSpec e;
    std::string weight;
    std::string extra;
    if (!(fields >> e.a >> e.b >> weight) || (fields >> extra)) {
      throw ValidationError("edge list line " + std::to_string(line_no) +
                            ": expected '<vertex> <vertex> <weight>'");
    }
    try {
      std::size_t used = 0;
      e.weight = std::stod(weight, &used);
      if (used != weight.size()) throw std::invalid_argument(weight);
    } catch (const std::exception&) {
      throw ValidationError("edge list line " + std::to_string(line_no) + ": bad weight '" +
                            weight + "'");
    }
    edges.push_back(std::move(e));
  }
  return build_graph(edges, options);
}

WeightedGraph load_graph(const std::filesystem::path& path, const GraphOptions& options) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open graph file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_edge_list(buffer.str(), options);
}

VertexSet vertex_set(const WeightedGraph& g, std::span<const std::string> ids) {
  VertexSet out;
  for (const std::string& id : ids) out.push_back(g.index_of(id));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VertexField make_field(const WeightedGraph& g,
                       const std::vector<std::pair<std::string, double>>& sparse) {
  VertexField u = g.zeros();
  for (const auto& [id, value] : sparse) {
    if (!std::isfinite(value)) throw ValidationError("nonfinite value at vertex '" + id + "'");
    u[g.index_of(id)] = value;
  }
  return u;
}

double nu_mass(const WeightedGraph& g, std::span<const VertexIndex> set) {
  double total = 0.0;
  for (VertexIndex v : set) {
    check_index(g, v);
    total += g.degree(v);
  }
  return total;
}

double nu_total(const WeightedGraph& g, const VertexField& u) {
  check_same_size(g, u);
  return kernels::weighted_sum(u.values(), g.degrees());
}

double inner_product_nu(const WeightedGraph& g, const VertexField& u, const VertexField& v) {
  check_same_size(g, u);
  check_same_size(g, v);
  return kernels::weighted_dot(u.values(), v.values(), g.degrees());
}

double norm_nu(const WeightedGraph& g, const VertexField& u) {
  return std::sqrt(inner_product_nu(g, u, u));
}

double distance_nu(const WeightedGraph& g, const VertexField& u, const VertexField& v) {
  check_same_size(g, u);
  check_same_size(g, v);
  return std::sqrt(kernels::weighted_sq_diff_sum(u.values(), v.values(), g.degrees()));
}

double distance_nu_l1(const WeightedGraph& g, const VertexField& u, const VertexField& v) {
  check_same_size(g, u);
  check_same_size(g, v);
  return kernels::weighted_abs_diff_sum(u.values(), v.values(), g.degrees());
}

double distance_sup(const VertexField& u, const VertexField& v) {
  if (u.size() != v.size()) throw ValidationError("vertex fields differ in size");
  return kernels::max_abs_diff(u.values(), v.values());
}

std::vector<std::size_t> graph_distances_from(const WeightedGraph& g, VertexIndex x) {
  check_index(g, x);
  constexpr auto unreached = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(g.vertex_count(), unreached);
  std::queue<VertexIndex> frontier;
  dist[x] = 0;
  frontier.push(x);
  while (!frontier.empty()) {
    const VertexIndex v = frontier.front();
    frontier.pop();
    for (const Incidence& inc : g.neighbors(v)) {
      if (dist[inc.neighbor] == unreached) {
        dist[inc.neighbor] = dist[v] + 1;
        frontier.push(inc.neighbor);
      }
    }
  }
  return dist;
}

std::size_t graph_distance(const WeightedGraph& g, VertexIndex x, VertexIndex y) {
  check_index(g, y);
  return graph_distances_from(g, x)[y];
}

std::vector<double> constraint_distances_from(const WeightedGraph& g,
                                              std::span<const double> edge_lengths,
                                              VertexIndex x) {
  check_index(g, x);
  if (edge_lengths.size() != g.edge_count()) {
    throw ValidationError("edge length table does not match the graph");
  }
  for (double c : edge_lengths) {
    if (!(c > 0.0)) throw ValidationError("edge lengths must be positive");
  }
  std::vector<double> dist(g.vertex_count(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, VertexIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[x] = 0.0;
  queue.emplace(0.0, x);
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    for (const Incidence& inc : g.neighbors(v)) {
      const double candidate = d + edge_lengths[inc.edge];
      if (candidate < dist[inc.neighbor]) {
        dist[inc.neighbor] = candidate;
        queue.emplace(candidate, inc.neighbor);
      }
    }
  }
  return dist;
}

double constraint_distance(const WeightedGraph& g, std::span<const double> edge_lengths,
                           VertexIndex x, VertexIndex y) {
  check_index(g, y);
  return constraint_distances_from(g, edge_lengths, x)[y];
}

VertexSet nonlocal_boundary(const WeightedGraph& g, std::span<const VertexIndex> set) {
  std::vector<bool> inside(g.vertex_count(), false);
  for (VertexIndex v : set) {
    check_index(g, v);
    inside[v] = true;
  }
  std::vector<bool> boundary(g.vertex_count(), false);
  for (VertexIndex v : set) {
    for (const Incidence& inc : g.neighbors(v)) {
      if (!inside[inc.neighbor]) boundary[inc.neighbor] = true;
    }
  }
  VertexSet out;
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    if (boundary[v]) out.push_back(v);
  }
  return out;
}

WeightedGraph build_path(std::size_t n, double weight) {
  if (n < 2) throw ValidationError("path needs at least 2 vertices");
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 1; i < n; ++i) {
    edges.push_back({"x" + std::to_string(i), "x" + std::to_string(i + 1), weight});
  }
  return build_graph(edges);
}

WeightedGraph build_star(std::span<const double> weights) {
  if (weights.empty()) throw ValidationError("star needs at least one edge weight");
  std::vector<EdgeSpec> edges{{"x0", "x1", weights[0]}};
  for (std::size_t k = 1; k < weights.size(); ++k) {
    edges.push_back({"x1", "x" + std::to_string(k + 1), weights[k]});
  }
  return build_graph(edges);
}

WeightedGraph build_truncated_z(int radius) {
  if (radius < 1) throw ValidationError("truncated Z needs radius >= 1");
  std::vector<EdgeSpec> edges;
  for (int x = -radius; x < radius; ++x) {
    edges.push_back({std::to_string(x), std::to_string(x + 1), 1.0});
  }
  GraphOptions options;
  for (int r : {radius, radius - 1}) {
    options.guard_band.push_back(std::to_string(r));
    options.guard_band.push_back(std::to_string(-r));
  }
  return build_graph(edges, options);
}

}  // namespace sandpile
