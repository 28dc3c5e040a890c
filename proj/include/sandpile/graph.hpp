#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sandpile {

using VertexIndex = std::size_t;
using VertexSet = std::vector<VertexIndex>;

/// Real value per vertex (sand height, source rate, ...), indexed by the
/// graph's canonical vertex order.
class VertexField {
 public:
  VertexField() = default;
  explicit VertexField(std::size_t size, double value = 0.0) : values_(size, value) {}
  VertexField(std::initializer_list<double> values) : values_(values) {}
  explicit VertexField(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vector() const { return values_; }

  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool operator==(const VertexField&) const = default;

 private:
  std::vector<double> values_;
};

/// Undirected edge in canonical form: tail < head in vertex order.
struct Edge {
  VertexIndex tail;
  VertexIndex head;
  double weight;
};

struct Incidence {
  VertexIndex neighbor;
  std::size_t edge;
};

struct EdgeSpec {
  std::string a;
  std::string b;
  double weight;
};

struct GraphOptions {
  /// Declared bound M_w on the weights; validated if present.
  std::optional<double> weight_bound;
  /// Vertices that a solver run must leave untouched (truncation rings).
  std::vector<std::string> guard_band;
};

/// Connected, loop-free, symmetric weighted graph. Immutable after
/// construction; degrees are cached.
class WeightedGraph {
 public:
  std::size_t vertex_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  std::span<const std::string> vertex_ids() const { return ids_; }
  const std::string& id(VertexIndex v) const { return ids_.at(v); }
  std::optional<VertexIndex> find(std::string_view id) const;
  /// Throws ValidationError for unknown ids.
  VertexIndex index_of(std::string_view id) const;

  std::span<const Edge> edges() const { return edges_; }
  std::span<const std::int32_t> edge_tails() const { return tails_; }
  std::span<const std::int32_t> edge_heads() const { return heads_; }
  std::span<const Incidence> neighbors(VertexIndex v) const;

  double degree(VertexIndex v) const { return degrees_[v]; }
  std::span<const double> degrees() const { return degrees_; }
  /// w_xy, or 0 when x and y are not adjacent.
  double weight(VertexIndex x, VertexIndex y) const;
  std::optional<std::size_t> edge_between(VertexIndex x, VertexIndex y) const;

  double max_weight() const { return max_weight_; }
  /// Declared bound if one was given, the largest weight otherwise.
  double weight_bound() const { return weight_bound_.value_or(max_weight_); }

  std::span<const VertexIndex> guard_band() const { return guard_band_; }

  VertexField zeros() const { return VertexField(vertex_count()); }

 private:
  friend WeightedGraph build_graph(std::span<const EdgeSpec>, const GraphOptions&);

  std::vector<std::string> ids_;
  std::map<std::string, VertexIndex, std::less<>> index_;
  std::vector<Edge> edges_;
  std::vector<std::int32_t> tails_;
  std::vector<std::int32_t> heads_;
  std::vector<std::size_t> adjacency_offsets_;
  std::vector<Incidence> adjacency_;
  std::vector<double> degrees_;
  double max_weight_ = 0.0;
  std::optional<double> weight_bound_;
  std::vector<VertexIndex> guard_band_;
};

/// Vertices are ordered lexicographically by id; edges by (tail, head).
/// Rejects nonpositive weights, loops, duplicate edges and disconnected
/// input with ValidationError.
WeightedGraph build_graph(std::span<const EdgeSpec> edges, const GraphOptions& options = {});

/// Edge-list text: `<id> <id> <weight>` per line, `#` starts a comment line.
WeightedGraph parse_edge_list(std::string_view text, const GraphOptions& options = {});
WeightedGraph load_graph(const std::filesystem::path& path, const GraphOptions& options = {});

VertexSet vertex_set(const WeightedGraph& g, std::span<const std::string> ids);
VertexField make_field(const WeightedGraph& g,
                       const std::vector<std::pair<std::string, double>>& sparse);

/// ν_G(A) = Σ_{x∈A} d_x.
double nu_mass(const WeightedGraph& g, std::span<const VertexIndex> set);
/// Σ_x u(x) d_x.
double nu_total(const WeightedGraph& g, const VertexField& u);
/// ⟨u, v⟩ in L²(V, ν_G).
double inner_product_nu(const WeightedGraph& g, const VertexField& u, const VertexField& v);
double norm_nu(const WeightedGraph& g, const VertexField& u);
double distance_nu(const WeightedGraph& g, const VertexField& u, const VertexField& v);
/// ν-weighted L¹ norm of u - v.
double distance_nu_l1(const WeightedGraph& g, const VertexField& u, const VertexField& v);
double distance_sup(const VertexField& u, const VertexField& v);

/// Hop-count distance (weights ignored).
std::size_t graph_distance(const WeightedGraph& g, VertexIndex x, VertexIndex y);
/// All hop distances from x.
std::vector<std::size_t> graph_distances_from(const WeightedGraph& g, VertexIndex x);

/// Shortest path with per-edge lengths (indexed like g.edges()).
double constraint_distance(const WeightedGraph& g, std::span<const double> edge_lengths,
                           VertexIndex x, VertexIndex y);
std::vector<double> constraint_distances_from(const WeightedGraph& g,
                                              std::span<const double> edge_lengths,
                                              VertexIndex x);

/// {y ∉ A : y ∼ x for some x ∈ A}, sorted.
VertexSet nonlocal_boundary(const WeightedGraph& g, std::span<const VertexIndex> set);

/// Path x1 - x2 - ... - xn with a common weight.
WeightedGraph build_path(std::size_t n, double weight = 1.0);
/// Star around x1: edge (x0, x1) gets weights[0], edge (x1, x{k+1}) gets weights[k].
WeightedGraph build_star(std::span<const double> weights);
/// Vertices -R..R with unit weights between neighbours; the outermost two
/// rings form the guard band.
WeightedGraph build_truncated_z(int radius);

}  // namespace sandpile
