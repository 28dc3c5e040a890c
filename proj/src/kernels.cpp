#include "sandpile/kernels.hpp"

#include <atomic>
#include <cassert>
#include <stdexcept>
#include <string>

namespace sandpile::kernels {
namespace {

struct KernelTable {
  Backend backend;
  double (*weighted_dot)(const double*, const double*, const double*, std::size_t);
  double (*weighted_sum)(const double*, const double*, std::size_t);
  double (*weighted_abs_diff_sum)(const double*, const double*, const double*, std::size_t);
  double (*weighted_sq_diff_sum)(const double*, const double*, const double*, std::size_t);
  double (*max_abs_diff)(const double*, const double*, std::size_t);
  void (*axpy)(const double*, double, const double*, double*, std::size_t);
  void (*edge_differences)(const double*, const std::int32_t*, const std::int32_t*, double*,
                           std::size_t);
};

constexpr KernelTable scalar_table{
    Backend::scalar,          scalar::weighted_dot, scalar::weighted_sum,
    scalar::weighted_abs_diff_sum, scalar::weighted_sq_diff_sum, scalar::max_abs_diff,
    scalar::axpy,             scalar::edge_differences,
};

#if defined(SANDPILE_HAVE_AVX2)
constexpr KernelTable avx2_table{
    Backend::avx2,          avx2::weighted_dot, avx2::weighted_sum,
    avx2::weighted_abs_diff_sum, avx2::weighted_sq_diff_sum, avx2::max_abs_diff,
    avx2::axpy,             avx2::edge_differences,
};
#endif

#if defined(SANDPILE_HAVE_NEON)
constexpr KernelTable neon_table{
    Backend::neon,          neon::weighted_dot, neon::weighted_sum,
    neon::weighted_abs_diff_sum, neon::weighted_sq_diff_sum, neon::max_abs_diff,
    neon::axpy,             neon::edge_differences,
};
#endif

const KernelTable* table_for(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return &scalar_table;
    case Backend::avx2:
#if defined(SANDPILE_HAVE_AVX2)
      if (__builtin_cpu_supports("avx2")) return &avx2_table;
#endif
      return nullptr;
    case Backend::neon:
#if defined(SANDPILE_HAVE_NEON)
      return &neon_table;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable* detect() {
  for (Backend b : {Backend::avx2, Backend::neon}) {
    if (const KernelTable* t = table_for(b)) return t;
  }
  return &scalar_table;
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{detect()};
  return table;
}

const KernelTable& current() { return *active().load(std::memory_order_relaxed); }

}  // namespace

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "unknown";
}

bool backend_supported(Backend backend) { return table_for(backend) != nullptr; }

Backend best_backend() { return detect()->backend; }

Backend active_backend() { return current().backend; }

void set_backend(Backend backend) {
  const KernelTable* t = table_for(backend);
  if (t == nullptr) {
    throw std::invalid_argument("kernel backend not supported on this CPU: " +
                                std::string(backend_name(backend)));
  }
  active().store(t, std::memory_order_relaxed);
}

double weighted_dot(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w) {
  assert(a.size() == b.size() && a.size() == w.size());
  return current().weighted_dot(a.data(), b.data(), w.data(), a.size());
}

double weighted_sum(std::span<const double> a, std::span<const double> w) {
  assert(a.size() == w.size());
  return current().weighted_sum(a.data(), w.data(), a.size());
}

double weighted_abs_diff_sum(std::span<const double> a, std::span<const double> b,
                             std::span<const double> w) {
  assert(a.size() == b.size() && a.size() == w.size());
  return current().weighted_abs_diff_sum(a.data(), b.data(), w.data(), a.size());
}

double weighted_sq_diff_sum(std::span<const double> a, std::span<const double> b,
                            std::span<const double> w) {
  assert(a.size() == b.size() && a.size() == w.size());
  return current().weighted_sq_diff_sum(a.data(), b.data(), w.data(), a.size());
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return current().max_abs_diff(a.data(), b.data(), a.size());
}

void axpy(std::span<const double> x, double alpha, std::span<const double> y,
          std::span<double> out) {
  assert(x.size() == y.size() && x.size() == out.size());
  current().axpy(x.data(), alpha, y.data(), out.data(), x.size());
}

void edge_differences(std::span<const double> u, std::span<const std::int32_t> tails,
                      std::span<const std::int32_t> heads, std::span<double> out) {
  assert(tails.size() == heads.size() && tails.size() == out.size());
  current().edge_differences(u.data(), tails.data(), heads.data(), out.data(), tails.size());
}

}  // namespace sandpile::kernels
