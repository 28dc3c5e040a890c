#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "sandpile/kernels.hpp"
#include "support.hpp"

using namespace sandpile;
namespace k = sandpile::kernels;

namespace {

std::vector<k::Backend> available() {
  std::vector<k::Backend> out;
  for (k::Backend b : {k::Backend::avx2, k::Backend::neon}) {
    if (k::backend_supported(b)) out.push_back(b);
  }
  return out;
}

/// Restores the active backend on scope exit.
struct BackendGuard {
  k::Backend saved = k::active_backend();
  ~BackendGuard() { k::set_backend(saved); }
};

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void check_close(double simd, double scalar, double scale) {
  CHECK(std::abs(simd - scalar) <= 1e-13 * (1.0 + scale));
}

}  // namespace

TEST_CASE("scalar backend is always available") {
  CHECK(k::backend_supported(k::Backend::scalar));
  CHECK(k::backend_name(k::Backend::scalar) == "scalar");
  BackendGuard guard;
  k::set_backend(k::Backend::scalar);
  CHECK(k::active_backend() == k::Backend::scalar);
}

TEST_CASE("unsupported backend is rejected") {
  BackendGuard guard;
  for (k::Backend b : {k::Backend::avx2, k::Backend::neon}) {
    if (!k::backend_supported(b)) CHECK_THROWS_AS(k::set_backend(b), std::invalid_argument);
  }
}

TEST_CASE("SIMD kernels match the scalar reference") {
  const auto backends = available();
  if (backends.empty()) MESSAGE("no SIMD backend on this machine; only scalar is exercised");
  auto rng = testing::make_rng(101);
  BackendGuard guard;
  for (k::Backend b : backends) {
    CAPTURE(k::backend_name(b));
    for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 16, 31, 64, 100, 257, 1000}) {
      CAPTURE(n);
      const auto a = testing::random_field(rng, n, -5, 5);
      const auto c = testing::random_field(rng, n, -5, 5);
      const auto w = testing::random_field(rng, n, 0.1, 4);
      double abs_scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) abs_scale += std::abs(a[i] * c[i] * w[i]) + std::abs(a[i] * w[i]);

      k::set_backend(k::Backend::scalar);
      const double dot0 = k::weighted_dot(a.values(), c.values(), w.values());
      const double sum0 = k::weighted_sum(a.values(), w.values());
      const double abs0 = k::weighted_abs_diff_sum(a.values(), c.values(), w.values());
      const double sq0 = k::weighted_sq_diff_sum(a.values(), c.values(), w.values());
      const double max0 = k::max_abs_diff(a.values(), c.values());
      std::vector<double> axpy0(n);
      k::axpy(a.values(), 0.37, c.values(), axpy0);

      k::set_backend(b);
      check_close(k::weighted_dot(a.values(), c.values(), w.values()), dot0, abs_scale);
      check_close(k::weighted_sum(a.values(), w.values()), sum0, abs_scale);
      check_close(k::weighted_abs_diff_sum(a.values(), c.values(), w.values()), abs0, abs0);
      check_close(k::weighted_sq_diff_sum(a.values(), c.values(), w.values()), sq0, sq0);
      CHECK(k::max_abs_diff(a.values(), c.values()) == max0);
      std::vector<double> axpy1(n);
      k::axpy(a.values(), 0.37, c.values(), axpy1);
      CHECK(bit_equal(axpy0, axpy1));
    }
  }
}

TEST_CASE("SIMD edge differences are bit-identical to scalar") {
  auto rng = testing::make_rng(202);
  BackendGuard guard;
  for (k::Backend b : available()) {
    for (std::size_t n : {2, 5, 9, 40}) {
      const WeightedGraph g = testing::random_connected_graph(rng, n, n);
      const auto u = testing::random_field(rng, n, -3, 3);
      std::vector<double> d0(g.edge_count());
      std::vector<double> d1(g.edge_count());
      k::set_backend(k::Backend::scalar);
      k::edge_differences(u.values(), g.edge_tails(), g.edge_heads(), d0);
      k::set_backend(b);
      k::edge_differences(u.values(), g.edge_tails(), g.edge_heads(), d1);
      CHECK(bit_equal(d0, d1));
      for (std::size_t e = 0; e < g.edge_count(); ++e) {
        CHECK(d0[e] == u[g.edges()[e].head] - u[g.edges()[e].tail]);
      }
    }
  }
}
