#include "herdgraph/posestream.hpp"

#include <algorithm>
#include <cmath>

#include "herdgraph/error.hpp"

namespace herdgraph {

void SmootherConfig::validate() const {
  if (window < 1 || window % 2 == 0) {
    throw Error(ErrorKind::Config, "ConfigError", "smoother.window must be an odd integer >= 1");
  }
  if (!(sigma > 0.0)) throw Error(ErrorKind::Config, "ConfigError", "smoother.sigma must be > 0");
}

KeypointTrajectory smooth(const KeypointTrajectory& traj, const SmootherConfig& cfg) {
  cfg.validate();
  const std::int64_t half = cfg.window / 2;
  const double inv2s2 = 1.0 / (2.0 * cfg.sigma * cfg.sigma);
  KeypointTrajectory out = traj;
  const auto& in = traj.samples;
  std::size_t lo = 0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (!in[i].present) continue;
    const std::int64_t f = in[i].frame_index;
    while (in[lo].frame_index < f - half) ++lo;
    double wsum = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t j = lo; j < in.size() && in[j].frame_index <= f + half; ++j) {
      if (!in[j].present) continue;
      const double k = static_cast<double>(in[j].frame_index - f);
      const double w = std::exp(-k * k * inv2s2);
      wsum += w;
      sx += w * in[j].position.x;
      sy += w * in[j].position.y;
    }
    out.samples[i].position = {sx / wsum, sy / wsum};
  }
  return out;
}

std::map<TrackId, TrajectorySet> assemble(const std::vector<Track>& tracks) {
  std::map<TrackId, TrajectorySet> out;
  for (const Track& t : tracks) {
    TrajectorySet& set = out[t.id];
    for (std::size_t k = 0; k < kNumKeypoints; ++k) {
      set[k].track_id = t.id;
      set[k].keypoint_index = k;
      set[k].samples.reserve(t.history.size());
    }
    for (const TrackSample& s : t.history) {
      for (std::size_t k = 0; k < kNumKeypoints; ++k) {
        TrajectoryPoint p{s.frame_index, {}, false};
        if (s.skeleton) {
          const Keypoint& kpt = s.skeleton->points[k];
          p.present = kpt.present();
          if (p.present) p.position = {kpt.x, kpt.y};
        }
        set[k].samples.push_back(p);
      }
    }
  }
  return out;
}

const PoseFrame* PoseTrack::at(std::int64_t frame_index) const {
  const auto it = std::lower_bound(
      frames.begin(), frames.end(), frame_index,
      [](const PoseFrame& f, std::int64_t idx) { return f.frame_index < idx; });
  if (it == frames.end() || it->frame_index != frame_index) return nullptr;
  return &*it;
}

PoseTrack stabilize(const Track& track, const SmootherConfig& cfg) {
  PoseTrack out;
  out.track_id = track.id;
  out.identity = identity_of(track);
  const TrajectorySet raw = assemble({track}).begin()->second;
  out.frames.resize(track.history.size());
  for (std::size_t i = 0; i < track.history.size(); ++i) {
    out.frames[i].frame_index = track.history[i].frame_index;
    out.frames[i].box = track.history[i].box;
  }
  for (std::size_t k = 0; k < kNumKeypoints; ++k) {
    const KeypointTrajectory s = cfg.window > 1 ? smooth(raw[k], cfg) : raw[k];
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
      out.frames[i].x[k] = s.samples[i].position.x;
      out.frames[i].y[k] = s.samples[i].position.y;
      out.frames[i].present[k] = s.samples[i].present ? 1 : 0;
    }
  }
  return out;
}

std::vector<PoseTrack> stabilize_all(const std::vector<Track>& tracks, const SmootherConfig& cfg) {
  cfg.validate();
  std::vector<PoseTrack> out;
  out.reserve(tracks.size());
  for (const Track& t : tracks) out.push_back(stabilize(t, cfg));
  return out;
}

}  // namespace herdgraph
