#include <immintrin.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "herdgraph/kernels.hpp"

namespace herdgraph::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmin(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_min_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_min_sd(m, _mm_unpackhi_pd(m, m)));
}

}  // namespace

PairStats pair_distance_stats(const PointSet& a, const PointSet& b) {
  PairStats s;
  const std::size_t na = a.x.size();
  const std::size_t nb = b.x.size();
  const std::size_t nb4 = nb & ~std::size_t{3};

  std::size_t b_present = 0;
  for (std::size_t j = 0; j < nb; ++j) b_present += b.mask[j] ? 1 : 0;

  const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  __m256d vmin = inf;
  __m256d vsum = _mm256_setzero_pd();
  double tail_sum = 0.0;
  double tail_min = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < na; ++i) {
    if (!a.mask[i]) continue;
    s.count += b_present;
    const __m256d px = _mm256_set1_pd(a.x[i]);
    const __m256d py = _mm256_set1_pd(a.y[i]);
    for (std::size_t j = 0; j < nb4; j += 4) {
      const __m256d dx = _mm256_sub_pd(px, _mm256_loadu_pd(b.x.data() + j));
      const __m256d dy = _mm256_sub_pd(py, _mm256_loadu_pd(b.y.data() + j));
      const __m256d d = _mm256_sqrt_pd(_mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy)));
      const __m256d keep = _mm256_castsi256_pd(_mm256_set_epi64x(
          b.mask[j + 3] ? -1 : 0, b.mask[j + 2] ? -1 : 0, b.mask[j + 1] ? -1 : 0,
          b.mask[j] ? -1 : 0));
      vsum = _mm256_add_pd(vsum, _mm256_and_pd(d, keep));
      vmin = _mm256_min_pd(vmin, _mm256_blendv_pd(inf, d, keep));
    }
    for (std::size_t j = nb4; j < nb; ++j) {
      if (!b.mask[j]) continue;
      const double dx = a.x[i] - b.x[j];
      const double dy = a.y[i] - b.y[j];
      const double d = std::sqrt(std::fma(dx, dx, dy * dy));
      tail_sum += d;
      tail_min = std::min(tail_min, d);
    }
  }
  s.sum = hsum(vsum) + tail_sum;
  s.min = std::min(hmin(vmin), tail_min);
  return s;
}

void squared_distances(std::span<const double> query, std::span<const double> rows,
                       std::size_t dim, std::span<double> out) {
  const std::size_t dim4 = dim & ~std::size_t{3};
  for (std::size_t r = 0; r < out.size(); ++r) {
    const double* row = rows.data() + r * dim;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim4; k += 4) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(query.data() + k), _mm256_loadu_pd(row + k));
      acc = _mm256_fmadd_pd(d, d, acc);
    }
    double total = hsum(acc);
    for (std::size_t k = dim4; k < dim; ++k) {
      const double d = query[k] - row[k];
      total = std::fma(d, d, total);
    }
    out[r] = total;
  }
}

}  // namespace herdgraph::kernels::avx2
