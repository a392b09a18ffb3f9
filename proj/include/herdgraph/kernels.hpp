#pragma once

// Data-parallel inner loops. Each kernel has a portable scalar reference and,
// on x86-64, an AVX2/FMA variant; the variant is chosen once at startup from
// CPUID and can be pinned with HERDGRAPH_SIMD=scalar|avx2 or set_level().

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace herdgraph::kernels {

enum class SimdLevel { Scalar, Avx2 };

std::string_view level_name(SimdLevel level);
bool supported(SimdLevel level);
SimdLevel active_level();
/// Pins the dispatch target. Throws Error(Config) if the CPU lacks the level.
void set_level(SimdLevel level);

/// Min and sum of Euclidean distances over all (i, j) with both points present.
struct PairStats {
  double min = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t count = 0;
};

/// Points are given in structure-of-arrays form; mask entries are 0 or 1.
struct PointSet {
  std::span<const double> x;
  std::span<const double> y;
  std::span<const std::uint8_t> mask;
};

PairStats pair_distance_stats(const PointSet& a, const PointSet& b);

/// out[r] = ||query - rows[r*dim .. r*dim+dim)||^2 for each row r.
void squared_distances(std::span<const double> query, std::span<const double> rows,
                       std::size_t dim, std::span<double> out);

namespace scalar {
PairStats pair_distance_stats(const PointSet& a, const PointSet& b);
void squared_distances(std::span<const double> query, std::span<const double> rows,
                       std::size_t dim, std::span<double> out);
}  // namespace scalar

namespace avx2 {
PairStats pair_distance_stats(const PointSet& a, const PointSet& b);
void squared_distances(std::span<const double> query, std::span<const double> rows,
                       std::size_t dim, std::span<double> out);
}  // namespace avx2

}  // namespace herdgraph::kernels
