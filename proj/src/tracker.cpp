#include "herdgraph/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "herdgraph/assignment.hpp"
#include "herdgraph/error.hpp"

namespace herdgraph {

void TrackerConfig::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(track_threshold)) {
    throw Error(ErrorKind::Config, "ConfigError", "tracker.track_threshold must be in [0,1]");
  }
  if (!in_unit(match_threshold)) {
    throw Error(ErrorKind::Config, "ConfigError", "tracker.match_threshold must be in [0,1]");
  }
  if (!in_unit(low_threshold) || low_threshold > track_threshold) {
    throw Error(ErrorKind::Config, "ConfigError",
                "tracker.low_threshold must be in [0, track_threshold]");
  }
  if (!(track_buffer_s >= 0.0)) {
    throw Error(ErrorKind::Config, "ConfigError", "tracker.track_buffer_s must be >= 0");
  }
  if (confirm_hits < 1) {
    throw Error(ErrorKind::Config, "ConfigError", "tracker.confirm_hits must be >= 1");
  }
}

std::string_view status_name(TrackStatus s) {
  switch (s) {
    case TrackStatus::Tentative:
      return "tentative";
    case TrackStatus::Confirmed:
      return "confirmed";
    case TrackStatus::Lost:
      return "lost";
    case TrackStatus::Removed:
      return "removed";
  }
  return "removed";
}

void IdentityVotes::add(const std::string& label) {
  for (auto& [name, count] : tallies_) {
    if (name == label) {
      ++count;
      return;
    }
  }
  tallies_.emplace_back(label, 1);
}

std::optional<std::string> IdentityVotes::majority() const {
  if (tallies_.empty()) return std::nullopt;
  // max_element keeps the first maximum, which is the earliest-seen label.
  const auto it = std::max_element(tallies_.begin(), tallies_.end(),
                                   [](const auto& a, const auto& b) { return a.second < b.second; });
  return it->first;
}

Track predict(Track t, const KalmanBoxFilter& filter) {
  filter.predict(t.state);
  return t;
}

std::optional<std::string> identity_of(const Track& t) { return t.votes.majority(); }

Tracker::Tracker(TrackerConfig cfg, StreamMeta meta)
    : cfg_(cfg), meta_(std::move(meta)), filter_(cfg.noise) {
  cfg_.validate();
  if (!meta_.valid()) throw Error(ErrorKind::Config, "ConfigError", "stream fps must be > 0");
  buffer_frames_ = static_cast<std::int64_t>(std::llround(cfg_.track_buffer_s * meta_.fps));
}

std::size_t Tracker::active_count() const {
  return static_cast<std::size_t>(std::count_if(tracks_.begin(), tracks_.end(), [](const Track& t) {
    return t.status == TrackStatus::Confirmed || t.status == TrackStatus::Lost;
  }));
}

StepResult Tracker::step(const FrameRecord& frame) {
  if (last_frame_ && frame.frame_index <= *last_frame_) {
    throw data_error("OutOfOrderFrame", "frame " + std::to_string(frame.frame_index) +
                                            " does not follow frame " +
                                            std::to_string(*last_frame_));
  }
  const std::int64_t elapsed = last_frame_ ? frame.frame_index - *last_frame_ : 1;
  last_frame_ = frame.frame_index;

  for (Track& t : tracks_) {
    if (t.status == TrackStatus::Removed) continue;
    for (std::int64_t k = 0; k < elapsed; ++k) filter_.predict(t.state);
  }

  StepResult result;
  result.assignment.assign(frame.detections.size(), std::nullopt);

  std::vector<std::size_t> high, low;
  for (std::size_t i = 0; i < frame.detections.size(); ++i) {
    const double c = frame.detections[i].confidence;
    if (c >= cfg_.track_threshold) {
      high.push_back(i);
    } else if (c >= cfg_.low_threshold) {
      low.push_back(i);
    }
  }

  std::vector<char> track_matched(tracks_.size(), 0);

  auto apply_match = [&](std::size_t ti, std::size_t di) {
    Track& t = tracks_[ti];
    const Detection& d = frame.detections[di];
    filter_.update(t.state, d.bbox);
    t.history.push_back({frame.frame_index, d.bbox, d.confidence, d.skeleton});
    if (d.identity && d.confidence >= cfg_.track_threshold) t.votes.add(*d.identity);
    t.last_detection_frame = frame.frame_index;
    ++t.hits;
    if (t.status == TrackStatus::Lost ||
        (t.status == TrackStatus::Tentative && t.hits >= cfg_.confirm_hits)) {
      t.status = TrackStatus::Confirmed;
    }
    track_matched[ti] = 1;
    result.assignment[di] = t.id;
  };

  // Matches `pool` tracks against `dets`; returns detections left unmatched.
  auto associate = [&](const std::vector<std::size_t>& pool, const std::vector<std::size_t>& dets) {
    std::vector<BBox> tboxes, dboxes;
    for (std::size_t ti : pool) tboxes.push_back(tracks_[ti].state.box());
    for (std::size_t di : dets) dboxes.push_back(frame.detections[di].bbox);
    const Assignment a = assign(iou_cost(tboxes, dboxes), cfg_.match_threshold);
    for (const auto& [r, c] : a.matches) apply_match(pool[r], dets[c]);
    std::vector<std::size_t> left;
    for (std::size_t c : a.unmatched_cols) left.push_back(dets[c]);
    return left;
  };

  auto pool_where = [&](auto pred) {
    std::vector<std::size_t> pool;
    for (std::size_t ti = 0; ti < tracks_.size(); ++ti) {
      if (!track_matched[ti] && pred(tracks_[ti].status)) pool.push_back(ti);
    }
    return pool;
  };

  // Stage 1: high-confidence detections against confirmed and lost tracks.
  std::vector<std::size_t> high_left = associate(
      pool_where([](TrackStatus s) { return s == TrackStatus::Confirmed || s == TrackStatus::Lost; }),
      high);
  // Stage 2: low-confidence detections against still-unmatched confirmed tracks.
  associate(pool_where([](TrackStatus s) { return s == TrackStatus::Confirmed; }), low);
  // Tentative tracks only take high-confidence detections.
  high_left = associate(pool_where([](TrackStatus s) { return s == TrackStatus::Tentative; }),
                        high_left);

  for (std::size_t ti = 0; ti < tracks_.size(); ++ti) {
    Track& t = tracks_[ti];
    if (track_matched[ti] || t.status == TrackStatus::Removed) continue;
    t.hits = 0;
    if (t.status == TrackStatus::Tentative) {
      t.status = TrackStatus::Removed;
      continue;
    }
    if (t.status == TrackStatus::Confirmed) t.status = TrackStatus::Lost;
    if (frame.frame_index - t.last_detection_frame > buffer_frames_) t.status = TrackStatus::Removed;
  }

  std::sort(high_left.begin(), high_left.end());
  for (std::size_t di : high_left) {
    const Detection& d = frame.detections[di];
    Track t;
    t.id = next_id_++;
    t.state = filter_.initiate(d.bbox);
    t.status = cfg_.confirm_hits <= 1 ? TrackStatus::Confirmed : TrackStatus::Tentative;
    t.last_detection_frame = frame.frame_index;
    t.hits = 1;
    t.history.push_back({frame.frame_index, d.bbox, d.confidence, d.skeleton});
    if (d.identity) t.votes.add(*d.identity);
    result.assignment[di] = t.id;
    tracks_.push_back(std::move(t));
  }
  return result;
}

std::vector<Track> track_stream(const std::vector<FrameRecord>& frames, const TrackerConfig& cfg,
                                const StreamMeta& meta) {
  Tracker tracker(cfg, meta);
  for (const FrameRecord& f : frames) tracker.step(f);
  return tracker.tracks();
}

}  // namespace herdgraph
