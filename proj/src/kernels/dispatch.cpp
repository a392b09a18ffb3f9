#include <atomic>
#include <cstdlib>
#include <string>

#include "herdgraph/error.hpp"
#include "herdgraph/kernels.hpp"

namespace herdgraph::kernels {

#ifndef HERDGRAPH_HAVE_AVX2
// Stubs keep the avx2:: symbols linkable on targets without the AVX2 build;
// supported(Avx2) is false there so dispatch never reaches them.
namespace avx2 {
PairStats pair_distance_stats(const PointSet& a, const PointSet& b) {
  return scalar::pair_distance_stats(a, b);
}
void squared_distances(std::span<const double> query, std::span<const double> rows,
                       std::size_t dim, std::span<double> out) {
  scalar::squared_distances(query, rows, dim, out);
}
}  // namespace avx2
#endif

namespace {

bool cpu_has_avx2() {
#if defined(HERDGRAPH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

SimdLevel detect() {
  const char* env = std::getenv("HERDGRAPH_SIMD");
  if (env != nullptr) {
    const std::string v(env);
    if (v == "scalar") return SimdLevel::Scalar;
    if (v == "avx2" && cpu_has_avx2()) return SimdLevel::Avx2;
  }
  return cpu_has_avx2() ? SimdLevel::Avx2 : SimdLevel::Scalar;
}

std::atomic<SimdLevel>& level_slot() {
  static std::atomic<SimdLevel> slot{detect()};
  return slot;
}

}  // namespace

std::string_view level_name(SimdLevel level) {
  return level == SimdLevel::Avx2 ? "avx2" : "scalar";
}

bool supported(SimdLevel level) { return level == SimdLevel::Scalar || cpu_has_avx2(); }

SimdLevel active_level() { return level_slot().load(std::memory_order_relaxed); }

void set_level(SimdLevel level) {
  if (!supported(level)) {
    throw Error(ErrorKind::Config, "UnsupportedSimd",
                "SIMD level '" + std::string(level_name(level)) + "' is not supported on this CPU");
  }
  level_slot().store(level, std::memory_order_relaxed);
}

PairStats pair_distance_stats(const PointSet& a, const PointSet& b) {
  if (active_level() == SimdLevel::Avx2) return avx2::pair_distance_stats(a, b);
  return scalar::pair_distance_stats(a, b);
}

void squared_distances(std::span<const double> query, std::span<const double> rows,
                       std::size_t dim, std::span<double> out) {
  if (active_level() == SimdLevel::Avx2) {
    avx2::squared_distances(query, rows, dim, out);
  } else {
    scalar::squared_distances(query, rows, dim, out);
  }
}

}  // namespace herdgraph::kernels
