#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "herdgraph/core.hpp"
#include "herdgraph/tracker.hpp"

namespace herdgraph {

struct TrajectoryPoint {
  std::int64_t frame_index = 0;
  Point2 position;
  bool present = false;

  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct KeypointTrajectory {
  TrackId track_id = 0;
  std::size_t keypoint_index = 0;
  std::vector<TrajectoryPoint> samples;  // strictly increasing frame_index
};

/// Gaussian weighted moving average over a centered window of frames.
struct SmootherConfig {
  int window = 7;
  double sigma = 7.0 / 4.0;

  static SmootherConfig with_window(int window) { return {window, window / 4.0}; }
  /// window odd and >= 1, sigma > 0; throws Error(Config).
  void validate() const;
};

/// Replaces each present sample by the weighted mean of present samples at
/// frame offsets |k| <= window/2, weights exp(-k^2 / (2 sigma^2)) renormalized
/// over the present ones. Absent samples stay absent.
KeypointTrajectory smooth(const KeypointTrajectory& traj, const SmootherConfig& cfg);

using TrajectorySet = std::array<KeypointTrajectory, kNumKeypoints>;

/// One trajectory per (track, keypoint) over the track's history frames.
std::map<TrackId, TrajectorySet> assemble(const std::vector<Track>& tracks);

/// Frame-aligned stabilized skeleton plus the detection box, laid out for the
/// distance kernels.
struct PoseFrame {
  std::int64_t frame_index = 0;
  BBox box;
  std::array<double, kNumKeypoints> x{};
  std::array<double, kNumKeypoints> y{};
  std::array<std::uint8_t, kNumKeypoints> present{};

  friend bool operator==(const PoseFrame&, const PoseFrame&) = default;
};

struct PoseTrack {
  TrackId track_id = 0;
  std::optional<std::string> identity;
  std::vector<PoseFrame> frames;  // strictly increasing frame_index

  /// Frame record at `frame_index`, or nullptr.
  const PoseFrame* at(std::int64_t frame_index) const;
};

/// assemble + smooth + repack for a single track.
PoseTrack stabilize(const Track& track, const SmootherConfig& cfg);
std::vector<PoseTrack> stabilize_all(const std::vector<Track>& tracks, const SmootherConfig& cfg);

}  // namespace herdgraph
