// Successive shortest augmenting paths with Johnson potentials.

#include "min_cost_flow.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sandpile::detail {
namespace {

struct Arc {
  int to;
  std::int64_t cap;
  double cost;
  int rev;
};

class FlowNetwork {
 public:
  explicit FlowNetwork(int n) : arcs_(static_cast<std::size_t>(n)) {}

  int add(int from, int to, std::int64_t cap, double cost) {
    auto& a = arcs_[static_cast<std::size_t>(from)];
    auto& b = arcs_[static_cast<std::size_t>(to)];
    a.push_back({to, cap, cost, static_cast<int>(b.size())});
    b.push_back({from, 0, -cost, static_cast<int>(a.size()) - 1});
    return static_cast<int>(a.size()) - 1;
  }

  const Arc& arc(int from, int index) const {
    return arcs_[static_cast<std::size_t>(from)][static_cast<std::size_t>(index)];
  }

  /// Pushes `amount` units from s to t along cheapest paths; returns the cost.
  double run(int s, int t, std::int64_t amount) {
    const auto n = arcs_.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> potential(n, 0.0);
    std::vector<double> dist(n);
    std::vector<int> prev_node(n);
    std::vector<int> prev_arc(n);
    std::vector<char> done(n);
    double total = 0.0;
    while (amount > 0) {
      // Dense Dijkstra on reduced costs; the network has at most ~100 nodes.
      std::fill(dist.begin(), dist.end(), inf);
      std::fill(done.begin(), done.end(), 0);
      dist[static_cast<std::size_t>(s)] = 0.0;
      for (;;) {
        int u = -1;
        for (std::size_t v = 0; v < n; ++v) {
          if (!done[v] && dist[v] < inf && (u < 0 || dist[v] < dist[static_cast<std::size_t>(u)])) {
            u = static_cast<int>(v);
          }
        }
        if (u < 0) break;
        const auto uu = static_cast<std::size_t>(u);
        done[uu] = 1;
        for (std::size_t k = 0; k < arcs_[uu].size(); ++k) {
          const Arc& a = arcs_[uu][k];
          if (a.cap <= 0) continue;
          const auto to = static_cast<std::size_t>(a.to);
          const double reduced = std::max(0.0, a.cost + potential[uu] - potential[to]);
          if (dist[uu] + reduced < dist[to]) {
            dist[to] = dist[uu] + reduced;
            prev_node[to] = u;
            prev_arc[to] = static_cast<int>(k);
          }
        }
      }
      if (dist[static_cast<std::size_t>(t)] == inf) throw std::runtime_error("transport network is infeasible");
      for (std::size_t v = 0; v < n; ++v) {
        if (dist[v] < inf) potential[v] += dist[v];
      }
      std::int64_t push = amount;
      for (int v = t; v != s; v = prev_node[static_cast<std::size_t>(v)]) {
        push = std::min(push, arc(prev_node[static_cast<std::size_t>(v)], prev_arc[static_cast<std::size_t>(v)]).cap);
      }
      for (int v = t; v != s; v = prev_node[static_cast<std::size_t>(v)]) {
        const int u = prev_node[static_cast<std::size_t>(v)];
        Arc& a = arcs_[static_cast<std::size_t>(u)][static_cast<std::size_t>(prev_arc[static_cast<std::size_t>(v)])];
        a.cap -= push;
        arcs_[static_cast<std::size_t>(a.to)][static_cast<std::size_t>(a.rev)].cap += push;
        total += static_cast<double>(push) * a.cost;
      }
      amount -= push;
    }
    return total;
  }

 private:
  std::vector<std::vector<Arc>> arcs_;
};

}  // namespace

TransportationResult solve_transportation(const std::vector<std::int64_t>& supply,
                                          const std::vector<std::int64_t>& demand,
                                          const std::vector<std::vector<double>>& cost) {
  const std::int64_t total = std::accumulate(supply.begin(), supply.end(), std::int64_t{0});
  if (total != std::accumulate(demand.begin(), demand.end(), std::int64_t{0})) {
    throw std::invalid_argument("supply and demand totals differ");
  }
  const int a = static_cast<int>(supply.size());
  const int b = static_cast<int>(demand.size());
  const int source = a + b;
  const int sink = a + b + 1;
  FlowNetwork net(a + b + 2);
  for (int i = 0; i < a; ++i) net.add(source, i, supply[static_cast<std::size_t>(i)], 0.0);
  for (int j = 0; j < b; ++j) net.add(a + j, sink, demand[static_cast<std::size_t>(j)], 0.0);
  std::vector<std::vector<int>> handle(static_cast<std::size_t>(a), std::vector<int>(static_cast<std::size_t>(b)));
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < b; ++j) {
      handle[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          net.add(i, a + j, total, cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  }
  TransportationResult result;
  result.cost = net.run(source, sink, total);
  result.flow.assign(static_cast<std::size_t>(a), std::vector<std::int64_t>(static_cast<std::size_t>(b)));
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < b; ++j) {
      result.flow[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          total - net.arc(i, handle[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]).cap;
    }
  }
  return result;
}

}  // namespace sandpile::detail
