// AArch64 variants. NEON is part of the base ISA there, so no extra flags.

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "sandpile/kernels.hpp"

namespace sandpile::kernels::neon {

double weighted_dot(const double* a, const double* b, const double* w, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t p = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vaddq_f64(acc, vmulq_f64(p, vld1q_f64(w + i)));
  }
  double sum = vaddvq_f64(acc);
  for (; i < n; ++i) sum += a[i] * b[i] * w[i];
  return sum;
}

double weighted_sum(const double* a, const double* w, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(w + i)));
  double sum = vaddvq_f64(acc);
  for (; i < n; ++i) sum += a[i] * w[i];
  return sum;
}

double weighted_abs_diff_sum(const double* a, const double* b, const double* w, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vaddq_f64(acc, vmulq_f64(d, vld1q_f64(w + i)));
  }
  double sum = vaddvq_f64(acc);
  for (; i < n; ++i) sum += std::abs(a[i] - b[i]) * w[i];
  return sum;
}

double weighted_sq_diff_sum(const double* a, const double* b, const double* w, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vaddq_f64(acc, vmulq_f64(vmulq_f64(d, d), vld1q_f64(w + i)));
  }
  double sum = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d * w[i];
  }
  return sum;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  double m = vmaxvq_f64(acc);
  for (; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void axpy(const double* x, double alpha, const double* y, double* out, std::size_t n) {
  const float64x2_t a = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vaddq_f64(vld1q_f64(x + i), vmulq_f64(a, vld1q_f64(y + i))));
  for (; i < n; ++i) out[i] = x[i] + alpha * y[i];
}

void edge_differences(const double* u, const std::int32_t* tails, const std::int32_t* heads,
                      double* out, std::size_t m) {
  // No gather on NEON; pair up lanes by hand.
  std::size_t e = 0;
  for (; e + 2 <= m; e += 2) {
    const double hv[2] = {u[heads[e]], u[heads[e + 1]]};
    const double tv[2] = {u[tails[e]], u[tails[e + 1]]};
    vst1q_f64(out + e, vsubq_f64(vld1q_f64(hv), vld1q_f64(tv)));
  }
  for (; e < m; ++e) out[e] = u[heads[e]] - u[tails[e]];
}

}  // namespace sandpile::kernels::neon
