#include "herdgraph/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "herdgraph/error.hpp"
#include "herdgraph/kernels.hpp"

namespace herdgraph {

namespace {

constexpr std::array<std::string_view, kFeatureDim> kNames = {
    "min_pair_mean",  "min_pair_var",  "min_pair_dddt",  "min_pair_zcr",
    "mean_pair_mean", "mean_pair_var", "mean_pair_dddt", "mean_pair_zcr",
    "head_head_mean", "head_head_var", "head_head_dddt", "head_head_zcr",
};

kernels::PointSet point_set(const PoseFrame& p) {
  return {p.x, p.y, p.present};
}

std::optional<Point2> head_centroid(const PoseFrame& p) {
  double sx = 0.0, sy = 0.0;
  int n = 0;
  for (std::size_t k : head_group()) {
    if (!p.present[k]) continue;
    sx += p.x[k];
    sy += p.y[k];
    ++n;
  }
  if (n == 0) return std::nullopt;
  return Point2{sx / n, sy / n};
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  std::size_t n = 0;
};

Moments moments(std::span<const double> v, const std::vector<bool>& valid) {
  Moments m;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!valid[i]) continue;
    m.mean += v[i];
    ++m.n;
  }
  if (m.n == 0) return m;
  m.mean /= static_cast<double>(m.n);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!valid[i]) continue;
    const double d = v[i] - m.mean;
    m.variance += d * d;
  }
  m.variance /= static_cast<double>(m.n);
  return m;
}

}  // namespace

std::string_view series_name(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::MinPair:
      return "min_pair";
    case SeriesKind::MeanPair:
      return "mean_pair";
    case SeriesKind::HeadHead:
      return "head_head";
  }
  return "min_pair";
}

std::span<const std::string_view> feature_names() { return kNames; }

std::size_t DistanceSeries::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true));
}

DistanceSeries distance_series(const DyadWindow& w, SeriesKind kind, bool normalize) {
  DistanceSeries s;
  s.kind = kind;
  s.values.assign(w.frames.size(), 0.0);
  s.valid.assign(w.frames.size(), false);
  for (std::size_t t = 0; t < w.frames.size(); ++t) {
    const DyadFrame& f = w.frames[t];
    if (!f.both()) continue;
    const double norm = normalize ? 0.5 * (diagonal(f.a.box) + diagonal(f.b.box)) : 1.0;
    if (!(norm > 0.0)) continue;
    double d = 0.0;
    if (kind == SeriesKind::HeadHead) {
      const auto ha = head_centroid(f.a);
      const auto hb = head_centroid(f.b);
      if (!ha || !hb) continue;
      d = std::hypot(ha->x - hb->x, ha->y - hb->y);
    } else {
      const kernels::PairStats ps = kernels::pair_distance_stats(point_set(f.a), point_set(f.b));
      if (ps.count == 0) continue;
      d = kind == SeriesKind::MinPair ? ps.min : ps.sum / static_cast<double>(ps.count);
    }
    s.values[t] = d / norm;
    s.valid[t] = true;
  }
  if (s.valid_count() == 0) {
    throw data_error("EmptySeries", std::string(series_name(kind)) + " series has no valid frame");
  }
  return s;
}

Derivatives derivatives(const DistanceSeries& s, double fps) {
  const std::size_t n = s.values.size();
  if (s.valid_count() < 3) {
    throw data_error("TooShort", std::string(series_name(s.kind)) + " series has fewer than 3 valid frames");
  }
  Derivatives d;
  d.first.assign(n, 0.0);
  d.second.assign(n, 0.0);
  d.first_valid.assign(n, false);
  d.second_valid.assign(n, false);
  bool any = false;
  for (std::size_t t = 1; t + 1 < n; ++t) {
    if (!(s.valid[t - 1] && s.valid[t] && s.valid[t + 1])) continue;
    d.first[t] = (s.values[t + 1] - s.values[t - 1]) * fps / 2.0;
    d.second[t] = (s.values[t + 1] - 2.0 * s.values[t] + s.values[t - 1]) * fps * fps;
    d.first_valid[t] = true;
    d.second_valid[t] = true;
    any = true;
  }
  if (!any) {
    throw data_error("TooShort", std::string(series_name(s.kind)) + " series has no full 3-frame stencil");
  }
  return d;
}

double zero_crossing_rate(std::span<const double> values, const std::vector<bool>& valid, double fps,
                          double deadband) {
  std::size_t crossings = 0;
  std::size_t intervals = 0;
  for (std::size_t t = 0; t + 1 < values.size(); ++t) {
    if (!(valid[t] && valid[t + 1])) continue;
    ++intervals;
    const double a = values[t];
    const double b = values[t + 1];
    if (std::abs(a) > deadband && std::abs(b) > deadband && ((a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0))) {
      ++crossings;
    }
  }
  if (intervals == 0) return 0.0;
  return static_cast<double>(crossings) * fps / static_cast<double>(intervals);
}

FeatureVector extract(const DyadWindow& w, double fps, const FeatureConfig& cfg) {
  FeatureVector f{};
  try {
    for (SeriesKind kind : kSeriesKinds) {
      const DistanceSeries s = distance_series(w, kind, cfg.normalize);
      const Derivatives d = derivatives(s, fps);
      const Moments m = moments(s.values, s.valid);
      const Moments m1 = moments(d.first, d.first_valid);
      const Moments m2 = moments(d.second, d.second_valid);
      const double deadband = cfg.deadband_factor * std::sqrt(m2.variance);
      f[feature_index(kind, Statistic::Mean)] = m.mean;
      f[feature_index(kind, Statistic::Variance)] = m.variance;
      f[feature_index(kind, Statistic::Derivative)] = m1.mean;
      f[feature_index(kind, Statistic::ZeroCrossing)] =
          zero_crossing_rate(d.second, d.second_valid, fps, deadband);
    }
  } catch (const Error& e) {
    throw data_error("InsufficientData", "window " + std::to_string(w.span.start) + "-" +
                                             std::to_string(w.span.end) + ": " + e.what());
  }
  return f;
}

std::string_view feature_set_name(FeatureSet set) {
  switch (set) {
    case FeatureSet::Full:
      return "full";
    case FeatureSet::MinusRateOfChange:
      return "minus_rate_of_change";
    case FeatureSet::MinusTransitions:
      return "minus_distance_transitions";
    case FeatureSet::MeanDistanceOnly:
      return "mean_distance_only";
  }
  return "full";
}

std::vector<std::size_t> feature_columns(FeatureSet set) {
  std::vector<std::size_t> cols;
  for (SeriesKind kind : kSeriesKinds) {
    for (Statistic stat : {Statistic::Mean, Statistic::Variance, Statistic::Derivative, Statistic::ZeroCrossing}) {
      const bool keep = set == FeatureSet::Full ||
                        (set == FeatureSet::MinusRateOfChange && stat != Statistic::Derivative) ||
                        (set == FeatureSet::MinusTransitions && stat != Statistic::ZeroCrossing);
      if (keep) cols.push_back(feature_index(kind, stat));
    }
  }
  if (set == FeatureSet::MeanDistanceOnly) cols = {feature_index(SeriesKind::MeanPair, Statistic::Mean)};
  return cols;
}

}  // namespace herdgraph
