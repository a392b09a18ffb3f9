#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "herdgraph/assignment.hpp"
#include "herdgraph/error.hpp"
#include "herdgraph/evalkit.hpp"
#include "herdgraph/kalman.hpp"
#include "herdgraph/tracker.hpp"

using namespace herdgraph;

TEST_CASE("kalman prediction propagates constant velocity") {
  const KalmanBoxFilter f;
  KalmanState s = f.initiate(BBox::from_center(0, 0, 40, 20));
  const auto cov0 = s.covariance;
  f.predict(s);
  CHECK(s.mean(0) == 0.0);
  CHECK(s.mean(1) == 0.0);
  CHECK(s.covariance.trace() > cov0.trace());

  s.mean(4) = 2.0;
  const double cx = s.mean(0);
  f.predict(s);
  CHECK(s.mean(0) == doctest::Approx(cx + 2.0));

  KalmanState t = f.initiate(BBox::from_center(0, 0, 40, 20));
  t.mean(4) = 1.0;
  t.mean(5) = 1.0;
  for (int i = 0; i < 10; ++i) f.predict(t);
  CHECK(t.box().cx() == doctest::Approx(10.0));
  CHECK(t.box().cy() == doctest::Approx(10.0));
}

TEST_CASE("kalman update moves toward the measurement") {
  const KalmanBoxFilter f;
  KalmanState s = f.initiate(BBox::from_center(0, 0, 40, 20));
  f.predict(s);
  f.update(s, BBox::from_center(10, 0, 40, 20));
  CHECK(s.mean(0) > 0.0);
  CHECK(s.mean(0) < 10.0);
}

TEST_CASE("assignment gate") {
  Eigen::MatrixXd c(1, 1);
  c(0, 0) = 1.0 - 0.9;
  CHECK(assign(c, 0.7).matches.size() == 1);
  c(0, 0) = 1.0 - 0.5;
  const auto a = assign(c, 0.7);
  CHECK(a.matches.empty());
  CHECK(a.unmatched_rows == std::vector<std::size_t>{0});
  CHECK(a.unmatched_cols == std::vector<std::size_t>{0});
}

TEST_CASE("Hungarian equals brute force on small matrices") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 1; n <= 6; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      Eigen::MatrixXd c(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = rep % 4 == 0 ? std::floor(3.0 * u(rng)) : u(rng);
      const auto m = solve_min_cost(c);
      double got = 0.0;
      for (int i = 0; i < n; ++i) got += c(i, m[static_cast<std::size_t>(i)]);
      std::vector<int> p(static_cast<std::size_t>(n));
      std::iota(p.begin(), p.end(), 0);
      double best = 1e300;
      do {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += c(i, p[static_cast<std::size_t>(i)]);
        best = std::min(best, s);
      } while (std::next_permutation(p.begin(), p.end()));
      CHECK(got == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("rectangular assignment leaves the surplus unmatched") {
  Eigen::MatrixXd c(2, 3);
  c << 0.9, 0.1, 0.8, 0.2, 0.9, 0.95;
  const auto m = solve_min_cost(c);
  CHECK(m == std::vector<long>{1, 0});
}

TEST_CASE("identity votes") {
  IdentityVotes v;
  CHECK_FALSE(v.majority().has_value());
  v.add("A");
  v.add("B");
  CHECK(v.majority() == "A");
  v.add("B");
  CHECK(v.majority() == "B");
  IdentityVotes w;
  for (const char* s : {"A", "A", "B"}) w.add(s);
  CHECK(w.majority() == "A");
}

namespace {

const StreamMeta kMeta{30.0, 3840, 2160, "t"};

FrameRecord frame(std::int64_t f, std::vector<Detection> dets) {
  return {f, timestamp_of(f, kMeta.fps), std::move(dets)};
}

Detection det(double cx, double cy, double conf = 0.95) {
  return {BBox::from_center(cx, cy, 240, 100), conf, std::nullopt, std::nullopt};
}

}  // namespace

TEST_CASE("single detection starts a tentative track with id 1") {
  Tracker t(TrackerConfig{}, kMeta);
  const auto r = t.step(frame(0, {det(500, 500)}));
  REQUIRE(t.tracks().size() == 1);
  CHECK(t.tracks()[0].id == 1);
  CHECK(t.tracks()[0].status == TrackStatus::Tentative);
  CHECK(r.assignment[0] == TrackId{1});
}

TEST_CASE("track confirms after two hits and unmatched tentative tracks are removed") {
  Tracker t(TrackerConfig{}, kMeta);
  t.step(frame(0, {det(500, 500), det(1500, 500)}));
  t.step(frame(1, {det(502, 500)}));
  CHECK(t.tracks()[0].status == TrackStatus::Confirmed);
  CHECK(t.tracks()[1].status == TrackStatus::Removed);
}

TEST_CASE("low-confidence detections never start tracks") {
  Tracker t(TrackerConfig{}, kMeta);
  const auto r = t.step(frame(0, {det(500, 500, 0.3)}));
  CHECK(t.tracks().empty());
  CHECK_FALSE(r.assignment[0].has_value());
}

TEST_CASE("a track survives a gap one frame shorter than the buffer") {
  TrackerConfig cfg;
  Tracker t(cfg, kMeta);
  const std::int64_t gap = t.buffer_frames() - 1;
  std::int64_t f = 0;
  for (; f < 10; ++f) t.step(frame(f, {det(500.0 + 2.0 * static_cast<double>(f), 500)}));
  for (std::int64_t k = 0; k < gap; ++k, ++f) t.step(frame(f, {}));
  const auto r = t.step(frame(f, {det(500.0 + 2.0 * static_cast<double>(f), 500)}));
  CHECK(r.assignment[0] == TrackId{1});
  CHECK(t.tracks().size() == 1);
}

TEST_CASE("a track is removed after the buffer elapses") {
  Tracker t(TrackerConfig{}, kMeta);
  std::int64_t f = 0;
  for (; f < 5; ++f) t.step(frame(f, {det(500, 500)}));
  for (std::int64_t k = 0; k <= t.buffer_frames(); ++k, ++f) t.step(frame(f, {}));
  CHECK(t.tracks()[0].status == TrackStatus::Removed);
  t.step(frame(f, {det(500, 500)}));
  CHECK(t.tracks().back().id == 2);
}

TEST_CASE("out-of-order frames are rejected") {
  Tracker t(TrackerConfig{}, kMeta);
  t.step(frame(5, {}));
  CHECK_THROWS_AS(t.step(frame(5, {})), Error);
}

TEST_CASE("two crossing animals keep their identities") {
  std::vector<FrameRecord> frames;
  for (std::int64_t f = 0; f < 120; ++f) {
    const double dx = 10.0 * static_cast<double>(f);
    Detection a = det(300 + dx, 500), b = det(1500 - dx, 520);
    a.identity = "A";
    b.identity = "B";
    frames.push_back(frame(f, {a, b}));
  }
  const auto tracks = track_stream(frames, TrackerConfig{}, kMeta);
  CHECK(tracks.size() == 2);
  const auto r = mot_evaluate(ground_truth_from_identities(frames), tracked_frames(tracks));
  CHECK(r.id_switches == 0);
  CHECK(r.mota == 1.0);
}
