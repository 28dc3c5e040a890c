#include "sandpile/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace sandpile::kernels::scalar {

double weighted_dot(const double* a, const double* b, const double* w, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i] * w[i];
  return sum;
}

double weighted_sum(const double* a, const double* w, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * w[i];
  return sum;
}

double weighted_abs_diff_sum(const double* a, const double* b, const double* w, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += std::abs(a[i] - b[i]) * w[i];
  return sum;
}

double weighted_sq_diff_sum(const double* a, const double* b, const double* w, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d * w[i];
  }
  return sum;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void axpy(const double* x, double alpha, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + alpha * y[i];
}

void edge_differences(const double* u, const std::int32_t* tails, const std::int32_t* heads,
                      double* out, std::size_t m) {
  for (std::size_t e = 0; e < m; ++e) out[e] = u[heads[e]] - u[tails[e]];
}

}  // namespace sandpile::kernels::scalar
