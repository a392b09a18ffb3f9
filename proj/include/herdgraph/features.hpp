#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "herdgraph/dyad.hpp"

namespace herdgraph {

enum class SeriesKind { MinPair = 0, MeanPair = 1, HeadHead = 2 };

inline constexpr std::array<SeriesKind, 3> kSeriesKinds = {SeriesKind::MinPair, SeriesKind::MeanPair,
                                                           SeriesKind::HeadHead};

std::string_view series_name(SeriesKind kind);

/// Per-frame inter-animal distance. Values are divided by the frame's mean box
/// diagonal unless normalization is disabled.
struct DistanceSeries {
  SeriesKind kind = SeriesKind::MinPair;
  std::vector<double> values;
  std::vector<bool> valid;

  std::size_t valid_count() const;
};

struct FeatureConfig {
  bool normalize = true;
  /// ZCR deadband as a multiple of the per-window std of the second derivative.
  double deadband_factor = 0.01;
};

/// Order: for each series (min_pair, mean_pair, head_head) the four statistics
/// mean, var, dddt (mean signed first derivative, 1/s), zcr (zero crossings of
/// the second derivative per second).
inline constexpr std::size_t kFeatureDim = 12;
using FeatureVector = std::array<double, kFeatureDim>;

std::span<const std::string_view> feature_names();

enum class Statistic { Mean = 0, Variance = 1, Derivative = 2, ZeroCrossing = 3 };
constexpr std::size_t feature_index(SeriesKind kind, Statistic stat) {
  return static_cast<std::size_t>(kind) * 4 + static_cast<std::size_t>(stat);
}

/// Throws Error(Data, "EmptySeries") when no frame has a valid distance.
DistanceSeries distance_series(const DyadWindow& w, SeriesKind kind, bool normalize = true);

struct Derivatives {
  std::vector<double> first;  // per second
  std::vector<bool> first_valid;
  std::vector<double> second;  // per second^2
  std::vector<bool> second_valid;
};

/// Central differences wherever the three-frame stencil is valid. Throws
/// Error(Data, "TooShort") with fewer than 3 valid frames or no full stencil.
Derivatives derivatives(const DistanceSeries& s, double fps);

/// Sign changes between adjacent valid samples whose magnitudes both exceed
/// `deadband`, per second of valid adjacent-sample time.
double zero_crossing_rate(std::span<const double> values, const std::vector<bool>& valid, double fps,
                          double deadband);

/// Throws Error(Data, "InsufficientData") if any series is empty or too short.
FeatureVector extract(const DyadWindow& w, double fps, const FeatureConfig& cfg = {});

/// Column subsets used by the ablation study.
enum class FeatureSet { Full, MinusRateOfChange, MinusTransitions, MeanDistanceOnly };
std::string_view feature_set_name(FeatureSet set);
std::vector<std::size_t> feature_columns(FeatureSet set);

}  // namespace herdgraph
