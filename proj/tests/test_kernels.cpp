#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "herdgraph/kernels.hpp"

using namespace herdgraph;
namespace k = herdgraph::kernels;

namespace {

struct Cloud {
  std::vector<double> x, y;
  std::vector<std::uint8_t> mask;
  k::PointSet view() const { return {x, y, mask}; }
};

Cloud random_cloud(std::mt19937_64& rng, std::size_t n, double missing) {
  std::uniform_real_distribution<double> u(-500.0, 500.0), p(0.0, 1.0);
  Cloud c;
  for (std::size_t i = 0; i < n; ++i) {
    c.x.push_back(u(rng));
    c.y.push_back(u(rng));
    c.mask.push_back(p(rng) >= missing ? 1 : 0);
  }
  return c;
}

}  // namespace

TEST_CASE("scalar pair statistics by hand") {
  const Cloud a{{0.0, 10.0}, {0.0, 0.0}, {1, 1}};
  const Cloud b{{3.0, 100.0}, {4.0, 0.0}, {1, 0}};
  const auto s = k::scalar::pair_distance_stats(a.view(), b.view());
  CHECK(s.count == 2);
  CHECK(s.min == 5.0);
  CHECK(s.sum == doctest::Approx(5.0 + std::sqrt(49.0 + 16.0)));
}

TEST_CASE("no present pairs gives an empty result") {
  const Cloud a{{1.0}, {1.0}, {0}};
  const Cloud b{{2.0}, {2.0}, {1}};
  const auto s = k::pair_distance_stats(a.view(), b.view());
  CHECK(s.count == 0);
  CHECK(std::isinf(s.min));
}

TEST_CASE("AVX2 pair statistics agree with the scalar reference") {
  if (!k::supported(k::SimdLevel::Avx2)) return;
  std::mt19937_64 rng(42);
  for (std::size_t n : {1u, 3u, 4u, 5u, 7u, 8u, 27u, 31u}) {
    for (double missing : {0.0, 0.3, 0.9}) {
      const Cloud a = random_cloud(rng, n, missing), b = random_cloud(rng, 27, missing);
      const auto s = k::scalar::pair_distance_stats(a.view(), b.view());
      const auto v = k::avx2::pair_distance_stats(a.view(), b.view());
      CHECK(v.count == s.count);
      if (s.count == 0) continue;
      CHECK(v.min == doctest::Approx(s.min).epsilon(1e-14));
      CHECK(v.sum == doctest::Approx(s.sum).epsilon(1e-13));
    }
  }
}

TEST_CASE("AVX2 squared distances agree with the scalar reference") {
  if (!k::supported(k::SimdLevel::Avx2)) return;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 2.0);
  for (std::size_t dim : {1u, 3u, 4u, 9u, 12u}) {
    const std::size_t rows = 13;
    std::vector<double> q(dim), m(rows * dim), a(rows), b(rows);
    for (double& v : q) v = g(rng);
    for (double& v : m) v = g(rng);
    k::scalar::squared_distances(q, m, dim, a);
    k::avx2::squared_distances(q, m, dim, b);
    for (std::size_t r = 0; r < rows; ++r) CHECK(b[r] == doctest::Approx(a[r]).epsilon(1e-13));
  }
}

TEST_CASE("dispatch level can be pinned") {
  const auto before = k::active_level();
  k::set_level(k::SimdLevel::Scalar);
  CHECK(k::active_level() == k::SimdLevel::Scalar);
  CHECK(k::level_name(k::SimdLevel::Scalar) == "scalar");
  k::set_level(before);
}
