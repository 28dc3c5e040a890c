#include "sandpile/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "min_cost_flow.hpp"
#include "sandpile/errors.hpp"

namespace sandpile {
namespace {

constexpr std::size_t max_support = 50;
// 2^52: integer masses stay exact in double and in int64.
constexpr double mass_scale = 4503599627370496.0;

void check_density(const WeightedGraph& g, const VertexField& f, const char* name) {
  if (f.size() != g.vertex_count()) throw ValidationError(std::string(name) + " does not match the graph");
  for (double x : f) {
    if (!std::isfinite(x) || x < 0.0) throw ValidationError(std::string(name) + " must be finite and nonnegative");
  }
}

/// Integer masses proportional to f·d with the given total; entries below
/// the resolution are dropped and rounding is absorbed by the largest entries.
std::vector<std::int64_t> scaled_masses(const std::vector<double>& mass, double total, std::int64_t target) {
  std::vector<std::int64_t> out(mass.size());
  std::vector<std::pair<double, std::size_t>> remainder;
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    const double exact = mass[i] / total * static_cast<double>(target);
    out[i] = static_cast<std::int64_t>(std::floor(exact));
    sum += out[i];
    remainder.emplace_back(exact - std::floor(exact), i);
  }
  std::sort(remainder.begin(), remainder.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  for (std::size_t k = 0; sum < target; ++k, ++sum) ++out[remainder[k % remainder.size()].second];
  return out;
}

}  // namespace

DistanceTable::DistanceTable(std::size_t n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  if (values_.size() != n * n) throw ValidationError("distance table must be n x n");
}

DistanceTable DistanceTable::graph_metric(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<double> values(n * n);
  for (VertexIndex x = 0; x < n; ++x) {
    const auto row = graph_distances_from(g, x);
    for (VertexIndex y = 0; y < n; ++y) values[x * n + y] = static_cast<double>(row[y]);
  }
  return {n, std::move(values)};
}

DistanceTable DistanceTable::constraint_metric(const ConstraintSet& K) {
  const WeightedGraph& g = K.graph();
  const std::size_t n = g.vertex_count();
  std::vector<double> values(n * n);
  for (VertexIndex x = 0; x < n; ++x) {
    const auto row = constraint_distances_from(g, K.bounds(), x);
    std::copy(row.begin(), row.end(), values.begin() + static_cast<std::ptrdiff_t>(x * n));
  }
  return {n, std::move(values)};
}

TransportInstance make_transport_instance(const WeightedGraph& g, DistanceTable dist, VertexField f0,
                                          VertexField f1) {
  if (dist.size() != g.vertex_count()) throw ValidationError("distance table does not match the graph");
  check_density(g, f0, "f0");
  check_density(g, f1, "f1");
  const double m0 = nu_total(g, f0);
  const double m1 = nu_total(g, f1);
  if (std::abs(m0 - m1) > 1e-9 * std::max({1.0, std::abs(m0), std::abs(m1)})) {
    throw ValidationError("f0 and f1 must have equal mass (" + std::to_string(m0) + " vs " + std::to_string(m1) + ")");
  }
  return {&g, std::move(dist), std::move(f0), std::move(f1)};
}

bool is_lipschitz_wrt(const DistanceTable& dist, const VertexField& u, double tol) {
  const std::size_t n = dist.size();
  for (VertexIndex x = 0; x < n; ++x) {
    for (VertexIndex y = x + 1; y < n; ++y) {
      if (!(std::abs(u[x] - u[y]) <= dist(x, y) + tol)) return false;
    }
  }
  return true;
}

double kantorovich_pairing(const WeightedGraph& g, const VertexField& u, const VertexField& f0,
                           const VertexField& f1) {
  double s = 0.0;
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) s += u[x] * (f1[x] - f0[x]) * g.degree(x);
  return s;
}

double ot_cost_oracle(const TransportInstance& instance) {
  const WeightedGraph& g = *instance.graph;
  const double total = nu_total(g, instance.f0);
  if (total <= 0.0) return 0.0;
  std::vector<VertexIndex> sources;
  std::vector<VertexIndex> sinks;
  std::vector<double> supply;
  std::vector<double> demand;
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
    const double a = instance.f0[x] * g.degree(x);
    const double b = instance.f1[x] * g.degree(x);
    if (a >= total / mass_scale) {
      sources.push_back(x);
      supply.push_back(a);
    }
    if (b >= total / mass_scale) {
      sinks.push_back(x);
      demand.push_back(b);
    }
  }
  if (sources.size() > max_support || sinks.size() > max_support) {
    throw ValidationError("transport oracle supports at most " + std::to_string(max_support) + " support vertices");
  }
  const auto target = static_cast<std::int64_t>(mass_scale);
  double kept_supply = 0.0;
  double kept_demand = 0.0;
  for (double s : supply) kept_supply += s;
  for (double d : demand) kept_demand += d;
  const auto a = scaled_masses(supply, kept_supply, target);
  const auto b = scaled_masses(demand, kept_demand, target);
  std::vector<std::vector<double>> cost(sources.size(), std::vector<double>(sinks.size()));
  for (std::size_t i = 0; i < sources.size(); ++i) {
    for (std::size_t j = 0; j < sinks.size(); ++j) cost[i][j] = instance.dist(sources[i], sinks[j]);
  }
  const auto result = detail::solve_transportation(a, b, cost);
  return result.cost * total / mass_scale;
}

bool verify_potential(const TransportInstance& instance, const VertexField& u, double tol) {
  if (!is_lipschitz_wrt(instance.dist, u, tol)) throw ValidationError("potential is not 1-Lipschitz");
  const double pairing = kantorovich_pairing(*instance.graph, u, instance.f0, instance.f1);
  return pairing >= ot_cost_oracle(instance) - tol;
}

bool verify_dual_criteria(const WeightedGraph& g, const DistanceTable& dist, const VertexField& u,
                          const TransportMap& T, const VertexField& f0, const VertexField& f1, double tol) {
  if (!is_lipschitz_wrt(dist, u, tol)) return false;
  VertexField pushed(g.vertex_count());
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
    if (f0[x] == 0.0) continue;
    const auto it = T.find(x);
    const VertexIndex y = it == T.end() ? x : it->second;
    if (y >= g.vertex_count()) return false;
    if (std::abs(u[y] - u[x] - dist(x, y)) > tol) return false;
    pushed[y] += f0[x] * g.degree(x);
  }
  for (VertexIndex y = 0; y < g.vertex_count(); ++y) {
    if (std::abs(pushed[y] - f1[y] * g.degree(y)) > tol) return false;
  }
  return true;
}

}  // namespace sandpile
