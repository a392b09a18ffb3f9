#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "herdgraph/core.hpp"
#include "herdgraph/kalman.hpp"

namespace herdgraph {

struct TrackerConfig {
  /// High/low detection split and minimum confidence to start a track.
  double track_threshold = 0.6;
  /// Minimum IoU between a predicted track box and a detection.
  double match_threshold = 0.7;
  /// Seconds a lost track is retained before removal.
  double track_buffer_s = 2.0;
  /// Detections below this confidence are ignored entirely.
  double low_threshold = 0.1;
  /// Consecutive matched frames (including the first) before confirmation.
  int confirm_hits = 2;
  KalmanNoise noise{};

  /// Throws Error(Config) on out-of-range values.
  void validate() const;
};

enum class TrackStatus : std::uint8_t { Tentative, Confirmed, Lost, Removed };

std::string_view status_name(TrackStatus s);

struct TrackSample {
  std::int64_t frame_index = 0;
  BBox box;
  double confidence = 0.0;
  std::optional<Skeleton> skeleton;
};

/// Identity labels seen on a track, in first-seen order.
class IdentityVotes {
 public:
  void add(const std::string& label);
  /// Majority label; ties go to the label seen first.
  std::optional<std::string> majority() const;
  bool empty() const { return tallies_.empty(); }
  const std::vector<std::pair<std::string, int>>& tallies() const { return tallies_; }

 private:
  std::vector<std::pair<std::string, int>> tallies_;
};

struct Track {
  TrackId id = 0;
  KalmanState state;
  TrackStatus status = TrackStatus::Tentative;
  std::int64_t last_detection_frame = 0;
  int hits = 0;
  std::vector<TrackSample> history;
  IdentityVotes votes;
};

/// One constant-velocity prediction step.
Track predict(Track t, const KalmanBoxFilter& filter = KalmanBoxFilter{});

std::optional<std::string> identity_of(const Track& t);

struct StepResult {
  /// Track id per input detection, in input order; nullopt if the detection
  /// neither matched a track nor started one.
  std::vector<std::optional<TrackId>> assignment;
};

/// ByteTrack-style tracker: Kalman prediction, then two-stage association of
/// high- and low-confidence detections by Hungarian matching on IoU cost.
class Tracker {
 public:
  Tracker(TrackerConfig cfg, StreamMeta meta);

  /// Throws Error(Data, "OutOfOrderFrame") if frame indices do not increase.
  StepResult step(const FrameRecord& frame);

  /// Every track ever created, including removed ones, in id order.
  const std::vector<Track>& tracks() const { return tracks_; }
  std::size_t active_count() const;
  std::int64_t buffer_frames() const { return buffer_frames_; }
  const TrackerConfig& config() const { return cfg_; }

 private:
  TrackerConfig cfg_;
  StreamMeta meta_;
  KalmanBoxFilter filter_;
  std::int64_t buffer_frames_;
  std::vector<Track> tracks_;
  TrackId next_id_ = 1;
  std::optional<std::int64_t> last_frame_;
};

/// Runs a tracker over a whole stream.
std::vector<Track> track_stream(const std::vector<FrameRecord>& frames, const TrackerConfig& cfg,
                                const StreamMeta& meta);

}  // namespace herdgraph
