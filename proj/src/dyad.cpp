#include "herdgraph/dyad.hpp"

#include <algorithm>
#include <cmath>

#include "herdgraph/error.hpp"

namespace herdgraph {

void GateConfig::validate() const {
  if (!(alpha > 0.0)) throw Error(ErrorKind::Config, "ConfigError", "gate.alpha must be > 0");
  if (!(dwell_s >= 0.0)) throw Error(ErrorKind::Config, "ConfigError", "gate.dwell_s must be >= 0");
  if (!(window_s > 0.0)) throw Error(ErrorKind::Config, "ConfigError", "gate.window_s must be > 0");
  if (!(stride_s > 0.0)) throw Error(ErrorKind::Config, "ConfigError", "gate.stride_s must be > 0");
  if (!(min_coverage >= 0.0 && min_coverage <= 1.0)) {
    throw Error(ErrorKind::Config, "ConfigError", "gate.min_coverage must be in [0,1]");
  }
}

bool proximate(const BBox& a, const BBox& b, double alpha) {
  return center_distance(a, b) <= alpha * (diagonal(a) + diagonal(b));
}

std::int64_t dwell_frames(double dwell_s, double fps) {
  // The epsilon absorbs representation error in products like 4.0 * 29.97.
  const double frames = dwell_s * fps;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(frames - 1e-9)));
}

std::vector<FrameInterval> dwell_segments(const std::vector<bool>& series, double dwell_s,
                                          double fps, std::int64_t first_frame) {
  const std::int64_t min_len = dwell_frames(dwell_s, fps);
  std::vector<FrameInterval> out;
  const auto n = static_cast<std::int64_t>(series.size());
  std::int64_t i = 0;
  while (i < n) {
    if (!series[static_cast<std::size_t>(i)]) {
      ++i;
      continue;
    }
    std::int64_t j = i;
    while (j + 1 < n && series[static_cast<std::size_t>(j + 1)]) ++j;
    if (j - i + 1 >= min_len) out.push_back({first_frame + i, first_frame + j});
    i = j + 1;
  }
  return out;
}

double DyadWindow::coverage() const {
  if (frames.empty()) return 0.0;
  const auto both = std::count_if(frames.begin(), frames.end(), [](const DyadFrame& f) { return f.both(); });
  return static_cast<double>(both) / static_cast<double>(frames.size());
}

ProximitySeries proximity_series(const PoseTrack& a, const PoseTrack& b, double alpha) {
  ProximitySeries out;
  if (a.frames.empty() || b.frames.empty()) return out;
  const std::int64_t first = std::max(a.frames.front().frame_index, b.frames.front().frame_index);
  const std::int64_t last = std::min(a.frames.back().frame_index, b.frames.back().frame_index);
  if (last < first) return out;
  out.first_frame = first;
  out.values.assign(static_cast<std::size_t>(last - first + 1), false);
  for (std::int64_t f = first; f <= last; ++f) {
    const PoseFrame* pa = a.at(f);
    const PoseFrame* pb = b.at(f);
    if (pa && pb) out.values[static_cast<std::size_t>(f - first)] = proximate(pa->box, pb->box, alpha);
  }
  return out;
}

DyadWindow make_window(const PoseTrack& a, const PoseTrack& b, FrameInterval span) {
  const bool swap = b.track_id < a.track_id;
  const PoseTrack& first = swap ? b : a;
  const PoseTrack& second = swap ? a : b;
  DyadWindow w;
  w.track_a = first.track_id;
  w.track_b = second.track_id;
  w.identity_a = first.identity;
  w.identity_b = second.identity;
  w.span = span;
  w.frames.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, span.length())));
  for (std::int64_t f = span.start; f <= span.end; ++f) {
    DyadFrame df;
    df.frame_index = f;
    if (const PoseFrame* p = first.at(f)) {
      df.a = *p;
      df.has_a = true;
    }
    if (const PoseFrame* p = second.at(f)) {
      df.b = *p;
      df.has_b = true;
    }
    w.frames.push_back(df);
  }
  return w;
}

std::vector<FrameInterval> slice_segment(FrameInterval segment, const GateConfig& cfg, double fps) {
  const std::int64_t wf = std::max<std::int64_t>(1, std::llround(cfg.window_s * fps));
  const std::int64_t sf = std::max<std::int64_t>(1, std::llround(cfg.stride_s * fps));
  const std::int64_t df = dwell_frames(cfg.dwell_s, fps);
  std::vector<FrameInterval> out;
  if (segment.length() <= wf) {
    out.push_back(segment);
    return out;
  }
  std::int64_t start = segment.start;
  std::int64_t last = start;
  while (start + wf - 1 <= segment.end) {
    out.push_back({start, start + wf - 1});
    last = start;
    start += sf;
  }
  if (last + wf - 1 < segment.end) {
    const FrameInterval tail{last + sf, segment.end};
    if (tail.length() >= df) out.push_back(tail);
  }
  return out;
}

std::vector<DyadWindow> windows(const std::vector<PoseTrack>& tracks, const GateConfig& cfg,
                                const StreamMeta& meta) {
  cfg.validate();
  std::vector<const PoseTrack*> order;
  for (const PoseTrack& t : tracks) order.push_back(&t);
  std::sort(order.begin(), order.end(),
            [](const PoseTrack* x, const PoseTrack* y) { return x->track_id < y->track_id; });

  std::vector<DyadWindow> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const ProximitySeries prox = proximity_series(*order[i], *order[j], cfg.alpha);
      for (const FrameInterval& seg :
           dwell_segments(prox.values, cfg.dwell_s, meta.fps, prox.first_frame)) {
        for (const FrameInterval& span : slice_segment(seg, cfg, meta.fps)) {
          DyadWindow w = make_window(*order[i], *order[j], span);
          if (w.coverage() >= cfg.min_coverage) out.push_back(std::move(w));
        }
      }
    }
  }
  return out;
}

std::optional<DyadWindow> longest_segment(const PoseTrack& a, const PoseTrack& b,
                                          const GateConfig& cfg, const StreamMeta& meta) {
  cfg.validate();
  const ProximitySeries prox = proximity_series(a, b, cfg.alpha);
  const auto segs = dwell_segments(prox.values, cfg.dwell_s, meta.fps, prox.first_frame);
  if (segs.empty()) return std::nullopt;
  // First longest segment wins ties.
  const auto best = std::max_element(segs.begin(), segs.end(), [](const auto& x, const auto& y) {
    return x.length() < y.length();
  });
  return make_window(a, b, *best);
}

}  // namespace herdgraph
