#include "herdgraph/kalman.hpp"

#include <algorithm>

namespace herdgraph {

namespace {

constexpr double kMinHeight = 1e-6;

StateCovariance transition() {
  StateCovariance f = StateCovariance::Identity();
  for (int i = 0; i < 4; ++i) f(i, i + 4) = 1.0;
  return f;
}

}  // namespace

BBox KalmanState::box() const {
  const double h = std::max(mean(3), kMinHeight);
  const double w = mean(2) * h;
  return BBox::from_center(mean(0), mean(1), w, h);
}

Eigen::Vector4d KalmanBoxFilter::to_measurement(const BBox& b) {
  const double h = std::max(b.height(), kMinHeight);
  return {b.cx(), b.cy(), b.width() / h, h};
}

KalmanState KalmanBoxFilter::initiate(const BBox& measurement) const {
  KalmanState s;
  const Eigen::Vector4d z = to_measurement(measurement);
  s.mean.head<4>() = z;
  s.mean.tail<4>().setZero();
  const double h = z(3);
  const double wp = noise_.position_weight;
  const double wv = noise_.velocity_weight;
  StateVector std_dev;
  std_dev << 2 * wp * h, 2 * wp * h, 1e-2, 2 * wp * h, 10 * wv * h, 10 * wv * h, 1e-5, 10 * wv * h;
  s.covariance = std_dev.array().square().matrix().asDiagonal();
  return s;
}

void KalmanBoxFilter::predict(KalmanState& state) const {
  const double h = state.mean(3);
  const double wp = noise_.position_weight;
  const double wv = noise_.velocity_weight;
  StateVector std_dev;
  std_dev << wp * h, wp * h, 1e-2, wp * h, wv * h, wv * h, 1e-5, wv * h;
  const StateCovariance q = std_dev.array().square().matrix().asDiagonal();
  static const StateCovariance f = transition();
  state.mean = f * state.mean;
  state.covariance = f * state.covariance * f.transpose() + q;
}

Eigen::Vector4d KalmanBoxFilter::innovation(const KalmanState& state, const BBox& measurement) const {
  return to_measurement(measurement) - state.mean.head<4>();
}

void KalmanBoxFilter::update(KalmanState& state, const BBox& measurement) const {
  const double h = state.mean(3);
  const double wm = noise_.measurement_weight;
  Eigen::Vector4d std_dev(wm * h, wm * h, noise_.aspect_measurement_std, wm * h);
  const Eigen::Matrix4d r = std_dev.array().square().matrix().asDiagonal();

  // H selects the first four state components.
  const Eigen::Matrix4d s = state.covariance.topLeftCorner<4, 4>() + r;
  const Eigen::Matrix<double, 8, 4> pht = state.covariance.leftCols<4>();
  const Eigen::Matrix<double, 8, 4> gain = s.ldlt().solve(pht.transpose()).transpose();

  state.mean += gain * innovation(state, measurement);
  state.covariance -= gain * s * gain.transpose();
  state.covariance = 0.5 * (state.covariance + state.covariance.transpose()).eval();
  state.mean(3) = std::max(state.mean(3), kMinHeight);
}

}  // namespace herdgraph
