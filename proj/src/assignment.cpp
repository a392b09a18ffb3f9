#include "herdgraph/assignment.hpp"

#include <limits>

namespace herdgraph {

namespace {

// Rows <= cols. Classic potential-based shortest augmenting path, 1-indexed.
std::vector<long> hungarian_wide(const Eigen::MatrixXd& a) {
  const long n = a.rows();
  const long m = a.cols();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<long> p(m + 1, 0), way(m + 1, 0);
  for (long i = 1; i <= n; ++i) {
    p[0] = i;
    long j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const long i0 = p[j0];
      double delta = kInf;
      long j1 = 0;
      for (long j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (long j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const long j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<long> row_to_col(static_cast<std::size_t>(n), -1);
  for (long j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[static_cast<std::size_t>(p[j] - 1)] = j - 1;
  }
  return row_to_col;
}

}  // namespace

std::vector<long> solve_min_cost(const Eigen::MatrixXd& costs) {
  if (costs.rows() == 0 || costs.cols() == 0) {
    return std::vector<long>(static_cast<std::size_t>(costs.rows()), -1);
  }
  if (costs.rows() <= costs.cols()) return hungarian_wide(costs);
  const std::vector<long> col_to_row = hungarian_wide(costs.transpose());
  std::vector<long> row_to_col(static_cast<std::size_t>(costs.rows()), -1);
  for (std::size_t c = 0; c < col_to_row.size(); ++c) {
    if (col_to_row[c] >= 0) row_to_col[static_cast<std::size_t>(col_to_row[c])] = static_cast<long>(c);
  }
  return row_to_col;
}

Assignment assign(const Eigen::MatrixXd& costs, double match_threshold) {
  Assignment out;
  const std::vector<long> row_to_col = solve_min_cost(costs);
  std::vector<char> col_used(static_cast<std::size_t>(costs.cols()), 0);
  for (std::size_t r = 0; r < row_to_col.size(); ++r) {
    const long c = row_to_col[r];
    if (c >= 0 && 1.0 - costs(static_cast<Eigen::Index>(r), c) >= match_threshold) {
      out.matches.emplace_back(r, static_cast<std::size_t>(c));
      col_used[static_cast<std::size_t>(c)] = 1;
    } else {
      out.unmatched_rows.push_back(r);
    }
  }
  for (std::size_t c = 0; c < col_used.size(); ++c) {
    if (!col_used[c]) out.unmatched_cols.push_back(c);
  }
  return out;
}

}  // namespace herdgraph
