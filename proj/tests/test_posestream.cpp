#include "doctest.h"

#include <cmath>

#include "herdgraph/error.hpp"
#include "herdgraph/posestream.hpp"

using namespace herdgraph;

namespace {

KeypointTrajectory series(const std::vector<double>& xs) {
  KeypointTrajectory t;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    t.samples.push_back({static_cast<std::int64_t>(i), {xs[i], -xs[i]}, true});
  }
  return t;
}

Skeleton flat_skeleton(double x0) {
  Skeleton s;
  for (std::size_t i = 0; i < kNumKeypoints; ++i) {
    s.points[i] = {x0 + static_cast<double>(i), 10.0, Visibility::Visible, 0.9};
  }
  return s;
}

Track track_with(const std::vector<std::optional<Skeleton>>& skeletons) {
  Track t;
  t.id = 4;
  for (std::size_t f = 0; f < skeletons.size(); ++f) {
    t.history.push_back({static_cast<std::int64_t>(f), BBox{0, 0, 240, 100}, 0.9, skeletons[f]});
  }
  return t;
}

}  // namespace

TEST_CASE("smoothing keeps a constant trajectory") {
  const auto out = smooth(series(std::vector<double>(20, 3.5)), SmootherConfig{});
  for (const auto& s : out.samples) {
    CHECK(s.position.x == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(s.position.y == doctest::Approx(-3.5).epsilon(1e-15));
  }
}

TEST_CASE("an isolated sample is unchanged") {
  KeypointTrajectory t;
  t.samples = {{0, {0, 0}, false}, {1, {0, 0}, false}, {2, {7.0, 2.0}, true}, {3, {0, 0}, false}};
  const auto out = smooth(t, SmootherConfig{});
  CHECK(out.samples[2].position == Point2{7.0, 2.0});
  CHECK_FALSE(out.samples[1].present);
}

TEST_CASE("alternating signal with window 3 matches hand-computed weights") {
  std::vector<double> xs;
  for (int i = 0; i < 9; ++i) xs.push_back(i % 2 == 0 ? 1.0 : -1.0);
  const auto out = smooth(series(xs), SmootherConfig{3, 0.75});
  const double w1 = std::exp(-1.0 / (2.0 * 0.75 * 0.75));
  const double interior = (1.0 - 2.0 * w1) / (1.0 + 2.0 * w1);
  const double edge = (1.0 - w1) / (1.0 + w1);
  CHECK(out.samples[0].position.x == doctest::Approx(edge).epsilon(1e-14));
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    CHECK(out.samples[i].position.x == doctest::Approx(xs[i] * interior).epsilon(1e-14));
    CHECK(std::abs(out.samples[i].position.x) < 1.0);
  }
}

TEST_CASE("smoother configuration is validated") {
  CHECK_THROWS_AS(SmootherConfig({4, 1.0}).validate(), Error);
  CHECK_THROWS_AS(SmootherConfig({5, 0.0}).validate(), Error);
  CHECK_NOTHROW(SmootherConfig::with_window(1).validate());
}

TEST_CASE("assemble produces 27 trajectories per track") {
  const auto all = assemble({track_with({flat_skeleton(0), flat_skeleton(1), flat_skeleton(2)})});
  REQUIRE(all.count(4) == 1);
  for (const auto& traj : all.at(4)) {
    REQUIRE(traj.samples.size() == 3);
    for (const auto& s : traj.samples) CHECK(s.present);
  }
  const auto none = assemble({track_with({std::nullopt, std::nullopt})});
  for (const auto& traj : none.at(4))
    for (const auto& s : traj.samples) CHECK_FALSE(s.present);
}

TEST_CASE("samples are present exactly where skeletons exist") {
  const auto all = assemble({track_with({flat_skeleton(0), std::nullopt, flat_skeleton(2)})});
  for (const auto& traj : all.at(4)) {
    CHECK(traj.samples[0].present);
    CHECK_FALSE(traj.samples[1].present);
    CHECK(traj.samples[2].present);
  }
}

TEST_CASE("missing keypoints stay absent while occluded ones take part") {
  Skeleton s = flat_skeleton(0);
  s.points[kp::Nose].visibility = Visibility::Missing;
  s.points[kp::Poll].visibility = Visibility::Occluded;
  const PoseTrack p = stabilize(track_with({s, s, s}), SmootherConfig{});
  REQUIRE(p.frames.size() == 3);
  CHECK(p.frames[1].present[kp::Nose] == 0);
  CHECK(p.frames[1].present[kp::Poll] == 1);
  CHECK(p.at(1) != nullptr);
  CHECK(p.at(7) == nullptr);
}
