#include <algorithm>
#include <cmath>

#include "herdgraph/kernels.hpp"

namespace herdgraph::kernels::scalar {

PairStats pair_distance_stats(const PointSet& a, const PointSet& b) {
  PairStats s;
  const std::size_t na = a.x.size();
  const std::size_t nb = b.x.size();
  for (std::size_t i = 0; i < na; ++i) {
    if (!a.mask[i]) continue;
    for (std::size_t j = 0; j < nb; ++j) {
      if (!b.mask[j]) continue;
      const double dx = a.x[i] - b.x[j];
      const double dy = a.y[i] - b.y[j];
      const double d = std::sqrt(dx * dx + dy * dy);
      s.min = std::min(s.min, d);
      s.sum += d;
      ++s.count;
    }
  }
  return s;
}

void squared_distances(std::span<const double> query, std::span<const double> rows,
                       std::size_t dim, std::span<double> out) {
  for (std::size_t r = 0; r < out.size(); ++r) {
    const double* row = rows.data() + r * dim;
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = query[k] - row[k];
      acc += d * d;
    }
    out[r] = acc;
  }
}

}  // namespace herdgraph::kernels::scalar
