#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "herdgraph/core.hpp"
#include "herdgraph/posestream.hpp"

namespace herdgraph {

struct GateConfig {
  double alpha = 0.35;     // proximity factor on the sum of box diagonals
  double dwell_s = 4.0;    // minimum continuous proximity
  double window_s = 6.0;   // analysis window length
  double stride_s = 1.0;   // analysis window stride
  double min_coverage = 0.8;

  void validate() const;
};

/// Inclusive frame range.
struct FrameInterval {
  std::int64_t start = 0;
  std::int64_t end = -1;

  std::int64_t length() const { return end - start + 1; }
  friend bool operator==(const FrameInterval&, const FrameInterval&) = default;
};

/// center_distance(a, b) <= alpha * (diagonal(a) + diagonal(b)).
bool proximate(const BBox& a, const BBox& b, double alpha);

/// Minimum run length in frames for a dwell of `dwell_s` seconds.
std::int64_t dwell_frames(double dwell_s, double fps);

/// Maximal runs of true values at least dwell_frames long. `first_frame` is
/// the frame index of series[0].
std::vector<FrameInterval> dwell_segments(const std::vector<bool>& series, double dwell_s,
                                          double fps, std::int64_t first_frame = 0);

struct DyadFrame {
  std::int64_t frame_index = 0;
  bool has_a = false;
  bool has_b = false;
  PoseFrame a;
  PoseFrame b;

  bool both() const { return has_a && has_b; }
};

/// Two stabilized tracks over a candidate interval; one entry per frame of the span.
struct DyadWindow {
  TrackId track_a = 0;  // track_a < track_b
  TrackId track_b = 0;
  std::optional<std::string> identity_a;
  std::optional<std::string> identity_b;
  FrameInterval span;
  std::vector<DyadFrame> frames;

  double coverage() const;
};

/// Proximity per frame over the overlap of the two tracks' frame ranges.
struct ProximitySeries {
  std::int64_t first_frame = 0;
  std::vector<bool> values;
};

ProximitySeries proximity_series(const PoseTrack& a, const PoseTrack& b, double alpha);

DyadWindow make_window(const PoseTrack& a, const PoseTrack& b, FrameInterval span);

/// Sliding analysis windows over one dwell segment.
std::vector<FrameInterval> slice_segment(FrameInterval segment, const GateConfig& cfg, double fps);

/// Proximity gate, dwell filter and window slicing over every unordered pair.
std::vector<DyadWindow> windows(const std::vector<PoseTrack>& tracks, const GateConfig& cfg,
                                const StreamMeta& meta);

/// The longest surviving dwell segment of a pair as a single window, if any.
std::optional<DyadWindow> longest_segment(const PoseTrack& a, const PoseTrack& b,
                                          const GateConfig& cfg, const StreamMeta& meta);

}  // namespace herdgraph
