#pragma once

#include <Eigen/Dense>

#include "herdgraph/core.hpp"

namespace herdgraph {

/// Noise scales relative to the box height, following the usual
/// SORT/ByteTrack convention.
struct KalmanNoise {
  double position_weight = 1.0 / 20.0;
  double velocity_weight = 1.0 / 160.0;
  double measurement_weight = 1.0 / 20.0;
  double aspect_measurement_std = 1e-1;
};

using StateVector = Eigen::Matrix<double, 8, 1>;
using StateCovariance = Eigen::Matrix<double, 8, 8>;

/// (cx, cy, aspect, height, vcx, vcy, vaspect, vheight); velocities in units per frame.
struct KalmanState {
  StateVector mean = StateVector::Zero();
  StateCovariance covariance = StateCovariance::Identity();

  BBox box() const;
};

/// Constant-velocity filter over (center, aspect, height) box measurements.
class KalmanBoxFilter {
 public:
  explicit KalmanBoxFilter(KalmanNoise noise = {}) : noise_(noise) {}

  KalmanState initiate(const BBox& measurement) const;
  /// Advances the state by one frame.
  void predict(KalmanState& state) const;
  void update(KalmanState& state, const BBox& measurement) const;
  /// Measurement residual of `measurement` against the projected state.
  Eigen::Vector4d innovation(const KalmanState& state, const BBox& measurement) const;

  const KalmanNoise& noise() const { return noise_; }

  static Eigen::Vector4d to_measurement(const BBox& b);

 private:
  KalmanNoise noise_;
};

}  // namespace herdgraph
