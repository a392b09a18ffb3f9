#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <utility>
#include <vector>

namespace herdgraph {

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> matches;  // (row, col), rows ascending
  std::vector<std::size_t> unmatched_rows;
  std::vector<std::size_t> unmatched_cols;
};

/// Minimum-total-cost assignment of min(rows, cols) pairs (Hungarian method
/// with potentials, O(n^2 m)). Returns the matched column per row, -1 if none.
std::vector<long> solve_min_cost(const Eigen::MatrixXd& costs);

/// Optimal assignment on `costs` (= 1 - IoU), then drops pairs whose IoU is
/// below `match_threshold`; dropped rows and columns are reported unmatched.
Assignment assign(const Eigen::MatrixXd& costs, double match_threshold);

/// IoU cost matrix (1 - IoU) between two box lists.
template <typename BoxRange1, typename BoxRange2>
Eigen::MatrixXd iou_cost(const BoxRange1& rows, const BoxRange2& cols);

}  // namespace herdgraph

#include "herdgraph/core.hpp"

namespace herdgraph {

template <typename BoxRange1, typename BoxRange2>
Eigen::MatrixXd iou_cost(const BoxRange1& rows, const BoxRange2& cols) {
  Eigen::MatrixXd c(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      c(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = 1.0 - iou(rows[r], cols[k]);
    }
  }
  return c;
}

}  // namespace herdgraph
