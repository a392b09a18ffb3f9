#include "doctest.h"

#include <cmath>

#include "herdgraph/dyad.hpp"
#include "herdgraph/error.hpp"

using namespace herdgraph;

namespace {

const StreamMeta kMeta{30.0, 3840, 2160, "d"};

PoseTrack static_track(TrackId id, double cx, std::int64_t first, std::int64_t last) {
  PoseTrack t;
  t.track_id = id;
  for (std::int64_t f = first; f <= last; ++f) {
    PoseFrame p;
    p.frame_index = f;
    p.box = BBox::from_center(cx, 500, 240, 100);
    t.frames.push_back(p);
  }
  return t;
}

}  // namespace

TEST_CASE("proximity predicate") {
  const BBox a{0, 0, 1, 1};
  CHECK(proximate(a, a, 0.35));
  const double limit = 0.35 * 2.0 * std::sqrt(2.0);
  CHECK(proximate(a, BBox{limit, 0, limit + 1, 1}, 0.35) == (center_distance(a, BBox{limit, 0, limit + 1, 1}) <= limit));
  const double far = 0.36 * 2.0 * std::sqrt(2.0);
  CHECK_FALSE(proximate(a, BBox{far, 0, far + 1, 1}, 0.35));
  const double lim2 = 0.35 * (diagonal(BBox{0, 0, 3, 4}) + diagonal(BBox{0, 0, 3, 4}));
  CHECK(proximate(BBox{0, 0, 3, 4}, BBox{lim2, 0, lim2 + 3, 4}, 0.35));
  const double over = lim2 * (1.0 + 1e-12);
  CHECK_FALSE(proximate(BBox{0, 0, 3, 4}, BBox{over, 0, over + 3, 4}, 0.35));
}

TEST_CASE("dwell frames round up") {
  CHECK(dwell_frames(4.0, 30.0) == 120);
  CHECK(dwell_frames(4.0, 29.97) == 120);
  CHECK(dwell_frames(0.0, 30.0) == 1);
  CHECK(dwell_frames(3.5, 25.0) == 88);
}

TEST_CASE("dwell segments") {
  CHECK(dwell_segments(std::vector<bool>(200, false), 4.0, 30.0).empty());
  std::vector<bool> s(400, false);
  std::fill(s.begin() + 5, s.begin() + 125, true);
  auto segs = dwell_segments(s, 4.0, 30.0, 100);
  REQUIRE(segs.size() == 1);
  CHECK(segs[0] == FrameInterval{105, 224});
  std::vector<bool> two(400, false);
  std::fill(two.begin(), two.begin() + 119, true);
  std::fill(two.begin() + 200, two.begin() + 321, true);
  segs = dwell_segments(two, 4.0, 30.0);
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].length() == 121);
}

TEST_CASE("segment slicing into windows") {
  const GateConfig cfg;
  auto w = slice_segment({0, 179}, cfg, 30.0);
  REQUIRE(w.size() == 1);
  CHECK(w[0] == FrameInterval{0, 179});
  w = slice_segment({0, 299}, cfg, 30.0);
  CHECK(w.size() == 5);
  CHECK(w.back() == FrameInterval{120, 299});
  // 200 frames: one full window, then a 170-frame tail starting one stride later.
  w = slice_segment({0, 199}, cfg, 30.0);
  REQUIRE(w.size() == 2);
  CHECK(w[1] == FrameInterval{30, 199});
  // 250 frames: full windows at 0, 30 and 60; the tail [90, 249] is 160 frames.
  w = slice_segment({0, 249}, cfg, 30.0);
  REQUIRE(w.size() == 4);
  CHECK(w[3] == FrameInterval{90, 249});
}

TEST_CASE("never-proximate tracks give no windows") {
  const auto ws = windows({static_track(1, 500, 0, 299), static_track(2, 2500, 0, 299)}, GateConfig{}, kMeta);
  CHECK(ws.empty());
}

TEST_CASE("six seconds of proximity give one 180-frame window") {
  const auto ws = windows({static_track(1, 500, 0, 179), static_track(2, 600, 0, 179)}, GateConfig{}, kMeta);
  REQUIRE(ws.size() == 1);
  CHECK(ws[0].frames.size() == 180);
  CHECK(ws[0].coverage() == 1.0);
  CHECK(ws[0].track_a == 1);
}

TEST_CASE("three mutually proximate tracks give windows for every pair") {
  const auto ws = windows({static_track(3, 500, 0, 299), static_track(1, 560, 0, 299), static_track(2, 620, 0, 299)},
                          GateConfig{}, kMeta);
  CHECK(ws.size() == 3 * 5);
  for (const auto& w : ws) CHECK(w.track_a < w.track_b);
}

TEST_CASE("window coverage counts frames holding both animals") {
  const PoseTrack a = static_track(1, 500, 0, 179), b = static_track(2, 600, 0, 179);
  const auto w = make_window(b, a, {0, 199});
  CHECK(w.track_a == 1);
  CHECK(w.frames.size() == 200);
  CHECK(w.coverage() == doctest::Approx(180.0 / 200.0));
}

TEST_CASE("a gap in one track splits the proximity run") {
  PoseTrack a = static_track(1, 500, 0, 299), b = static_track(2, 600, 0, 299);
  b.frames.erase(b.frames.begin() + 130, b.frames.begin() + 140);
  const auto prox = proximity_series(a, b, 0.35);
  const auto segs = dwell_segments(prox.values, 4.0, 30.0, prox.first_frame);
  REQUIRE(segs.size() == 2);
  CHECK(segs[0] == FrameInterval{0, 129});
  CHECK(segs[1] == FrameInterval{140, 299});
}

TEST_CASE("gate configuration is validated") {
  GateConfig cfg;
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = GateConfig{};
  cfg.min_coverage = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
