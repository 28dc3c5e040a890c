#pragma once

// Data-parallel inner loops shared by the solvers. Each kernel has a scalar
// reference implementation and vectorised variants (AVX2 on x86-64, NEON on
// AArch64) chosen once at startup from the CPU's feature set. Elementwise
// kernels are bit-identical across backends; reductions agree up to
// summation-order rounding.

#include <cstdint>
#include <span>
#include <string_view>

namespace sandpile::kernels {

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend backend);
bool backend_supported(Backend backend);
/// Widest supported backend on this machine.
Backend best_backend();
Backend active_backend();
/// Throws std::invalid_argument if the backend is not supported here.
void set_backend(Backend backend);

/// Σ a[i] b[i] w[i]
double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w);
/// Σ a[i] w[i]
double weighted_sum(std::span<const double> a, std::span<const double> w);
/// Σ |a[i] - b[i]| w[i]
double weighted_abs_diff_sum(std::span<const double> a, std::span<const double> b,
                             std::span<const double> w);
/// Σ (a[i] - b[i])² w[i]
double weighted_sq_diff_sum(std::span<const double> a, std::span<const double> b,
                            std::span<const double> w);
/// max |a[i] - b[i]|
double max_abs_diff(std::span<const double> a, std::span<const double> b);
/// out[i] = x[i] + alpha y[i]
void axpy(std::span<const double> x, double alpha, std::span<const double> y,
          std::span<double> out);
/// out[e] = u[heads[e]] - u[tails[e]]
void edge_differences(std::span<const double> u, std::span<const std::int32_t> tails,
                      std::span<const std::int32_t> heads, std::span<double> out);

// Direct entry points per backend, used by the equivalence tests.
namespace scalar {
double weighted_dot(const double* a, const double* b, const double* w, std::size_t n);
double weighted_sum(const double* a, const double* w, std::size_t n);
double weighted_abs_diff_sum(const double* a, const double* b, const double* w, std::size_t n);
double weighted_sq_diff_sum(const double* a, const double* b, const double* w, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
void axpy(const double* x, double alpha, const double* y, double* out, std::size_t n);
void edge_differences(const double* u, const std::int32_t* tails, const std::int32_t* heads,
                      double* out, std::size_t m);
}  // namespace scalar

#define SANDPILE_KERNEL_DECLS                                                                   \
  double weighted_dot(const double* a, const double* b, const double* w, std::size_t n);       \
  double weighted_sum(const double* a, const double* w, std::size_t n);                        \
  double weighted_abs_diff_sum(const double* a, const double* b, const double* w,              \
                               std::size_t n);                                                 \
  double weighted_sq_diff_sum(const double* a, const double* b, const double* w,               \
                              std::size_t n);                                                  \
  double max_abs_diff(const double* a, const double* b, std::size_t n);                        \
  void axpy(const double* x, double alpha, const double* y, double* out, std::size_t n);       \
  void edge_differences(const double* u, const std::int32_t* tails, const std::int32_t* heads, \
                        double* out, std::size_t m);

namespace avx2 {
SANDPILE_KERNEL_DECLS
}
namespace neon {
SANDPILE_KERNEL_DECLS
}

#undef SANDPILE_KERNEL_DECLS

}  // namespace sandpile::kernels
