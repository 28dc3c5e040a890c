#pragma once

#include <cstdint>
#include <vector>

namespace sandpile::detail {

/// Uncapacitated transportation problem: ship supply[i] to demand[j] at
/// cost[i][j] per unit. Integer amounts, equal totals.
struct TransportationResult {
  double cost = 0.0;
  /// flow[i][j]
  std::vector<std::vector<std::int64_t>> flow;
};

TransportationResult solve_transportation(const std::vector<std::int64_t>& supply,
                                          const std::vector<std::int64_t>& demand,
                                          const std::vector<std::vector<double>>& cost);

}  // namespace sandpile::detail
