// Randomized and cross-module invariants.
#include "doctest.h"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "herdgraph/dyad.hpp"
#include "herdgraph/evalkit.hpp"
#include "herdgraph/kalman.hpp"
#include "herdgraph/metrics.hpp"
#include "herdgraph/posestream.hpp"
#include "herdgraph/socialnet.hpp"
#include "herdgraph/tracker.hpp"

using namespace herdgraph;

namespace {

BBox random_box(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-50.0, 50.0), size(0.0, 40.0);
  const double x = pos(rng), y = pos(rng);
  return {x, y, x + size(rng), y + size(rng)};
}

BBox transform(const BBox& b, double s, double dx, double dy) {
  return {s * b.x1 + dx, s * b.y1 + dy, s * b.x2 + dx, s * b.y2 + dy};
}

}  // namespace

TEST_CASE("box geometry properties") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const BBox a = random_box(rng), b = random_box(rng);
    const double v = iou(a, b);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(v == iou(b, a));
    if (a.area() > 0.0) CHECK(iou(a, a) == doctest::Approx(1.0));
    const BBox ta = transform(a, 1.0, 17.0, -3.0), tb = transform(b, 1.0, 17.0, -3.0);
    CHECK(diagonal(ta) == doctest::Approx(diagonal(a)));
    CHECK(center_distance(ta, tb) == doctest::Approx(center_distance(a, b)));
    CHECK(diagonal(transform(a, 3.0, 0.0, 0.0)) == doctest::Approx(3.0 * diagonal(a)));
  }
}

TEST_CASE("gate is symmetric and monotone in alpha") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 2000; ++i) {
    const BBox a = random_box(rng), b = random_box(rng);
    for (double alpha : {0.1, 0.35, 0.6}) {
      CHECK(proximate(a, b, alpha) == proximate(b, a, alpha));
      if (proximate(a, b, alpha)) CHECK(proximate(a, b, alpha * 1.1));
    }
  }
}

TEST_CASE("kalman prediction becomes exact as measurement noise vanishes") {
  // The filter starts at zero velocity, so exactness is reached asymptotically.
  auto final_error = [](double weight) {
    KalmanNoise n;
    n.measurement_weight = weight;
    n.aspect_measurement_std = weight;
    const KalmanBoxFilter f(n);
    auto truth = [](int k) { return BBox::from_center(100.0 + 3.0 * k, 50.0 - 1.5 * k, 80.0, 40.0); };
    KalmanState s = f.initiate(truth(0));
    double err = 0.0;
    for (int k = 1; k <= 200; ++k) {
      f.predict(s);
      err = center_distance(s.box(), truth(k));
      f.update(s, truth(k));
    }
    return err;
  };
  const double coarse = final_error(1e-1), fine = final_error(1e-4);
  CHECK(fine <= coarse);
  CHECK(fine < 1e-6);
}

TEST_CASE("track ids are unique and active tracks never exceed those created") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const StreamMeta meta;
  Tracker tracker(TrackerConfig{}, meta);
  for (std::int64_t f = 0; f < 400; ++f) {
    FrameRecord frame;
    frame.frame_index = f;
    for (int obj = 0; obj < 5; ++obj) {
      if (u(rng) < 0.25) continue;  // dropouts exercise the lost state
      const double x = 300.0 * obj + 2.0 * static_cast<double>(f % 100);
      Detection d;
      d.bbox = BBox::from_center(x, 400.0 + 20.0 * u(rng), 200.0, 100.0);
      d.confidence = u(rng);
      frame.detections.push_back(d);
    }
    tracker.step(frame);
    CHECK(tracker.active_count() <= tracker.tracks().size());
  }
  std::set<TrackId> ids;
  for (const auto& t : tracker.tracks()) CHECK(ids.insert(t.id).second);
  CHECK(*ids.begin() == 1);
  CHECK(*ids.rbegin() == static_cast<TrackId>(ids.size()));
}

TEST_CASE("smoothing reduces white-noise variance and never creates samples") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 5; ++rep) {
    KeypointTrajectory t;
    for (std::int64_t f = 0; f < 2000; ++f) t.samples.push_back({f, {g(rng), g(rng)}, u(rng) > 0.2});
    for (int window : {3, 7, 11}) {
      const auto s = smooth(t, SmootherConfig::with_window(window));
      REQUIRE(s.samples.size() == t.samples.size());
      double vin = 0.0, vout = 0.0;
      for (std::size_t i = 0; i < t.samples.size(); ++i) {
        CHECK(s.samples[i].frame_index == t.samples[i].frame_index);
        CHECK(s.samples[i].present == t.samples[i].present);
        if (!t.samples[i].present) continue;
        vin += t.samples[i].position.x * t.samples[i].position.x;
        vout += s.samples[i].position.x * s.samples[i].position.x;
      }
      CHECK(vout < vin);
    }
  }
}

TEST_CASE("confusion matrix totals and macro-F1 under relabeling") {
  std::mt19937_64 rng(10);
  const std::array<Label, 4> all = {Label::LickGroom, Label::Headbutt, Label::Displacement, Label::NoInteraction};
  // Any permutation of the three interaction classes, applied to truth and prediction alike.
  std::array<std::size_t, 3> perm = {0, 1, 2};
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<Label> truth, pred;
    for (int i = 0; i < 60; ++i) {
      truth.push_back(all[rng() % 3]);
      pred.push_back(all[rng() % 4]);
    }
    const ClsReport r = cls_evaluate(pred, truth);
    std::size_t trace = 0;
    for (std::size_t c = 0; c < kConfusionSize; ++c) {
      std::size_t row = 0;
      for (std::size_t p = 0; p < kConfusionSize; ++p) row += r.confusion[c][p];
      CHECK(row == r.per_class[c].support);
      trace += r.confusion[c][c];
    }
    CHECK(r.accuracy == doctest::Approx(static_cast<double>(trace) / 60.0));

    std::next_permutation(perm.begin(), perm.end());
    auto relabel = [&](Label l) { return l == Label::NoInteraction ? l : kInteractionClasses[perm[static_cast<std::size_t>(l)]]; };
    std::vector<Label> t2, p2;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      t2.push_back(relabel(truth[i]));
      p2.push_back(relabel(pred[i]));
    }
    CHECK(cls_evaluate(p2, t2).macro_f1 == doctest::Approx(r.macro_f1).epsilon(1e-12));
  }
}

TEST_CASE("graphs are invariant under identity relabeling") {
  std::mt19937_64 rng(12);
  const std::vector<std::string> names = {"a", "b", "c", "d", "e", "f"};
  const std::array<Label, 3> labels = {Label::LickGroom, Label::Headbutt, Label::Displacement};
  std::vector<InteractionEvent> events;
  for (int i = 0; i < 40; ++i) {
    const auto x = rng() % 6, y = (x + 1 + rng() % 5) % 6;
    events.push_back(make_event("s", names[x], names[y], labels[rng() % 3], {i * 100, i * 100 + 50}, 0.7));
  }
  // Reverse the alphabet so the sorted node order changes as well.
  std::map<std::string, std::string> rename;
  for (std::size_t i = 0; i < names.size(); ++i) rename[names[i]] = "z" + names[names.size() - 1 - i];
  std::vector<InteractionEvent> renamed;
  for (const auto& e : events) {
    renamed.push_back(make_event(e.source_id, rename[e.identity_a], rename[e.identity_b], e.label, e.span, e.confidence));
  }
  for (Layer layer : {Layer::Affiliative, Layer::Agonistic, Layer::Combined}) {
    const auto g = build_graph(merge_events(events, 30.0), layer, {});
    const auto h = build_graph(merge_events(renamed, 30.0), layer, {});
    CHECK(g.total_weight() == h.total_weight());
    const auto mg = compute_metrics(g), mh = compute_metrics(h);
    CHECK(mg.density == mh.density);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const auto& name = g.nodes[i];
      const auto j = static_cast<std::size_t>(std::find(h.nodes.begin(), h.nodes.end(), rename[name]) - h.nodes.begin());
      REQUIRE(j < h.nodes.size());
      CHECK(mg.nodes[i].weighted_degree == mh.nodes[j].weighted_degree);
      CHECK(mg.nodes[i].betweenness == doctest::Approx(mh.nodes[j].betweenness).epsilon(1e-12));
      CHECK(mg.nodes[i].clustering == doctest::Approx(mh.nodes[j].clustering).epsilon(1e-12));
      for (const auto& other : g.nodes) CHECK(g.weight(name, other) == h.weight(rename[name], rename[other]));
    }
  }
}

TEST_CASE("top-voted macro-F1 does not improve with noise") {
  // Scored before rejection; the reject rule favors slightly noisy clips whose
  // margins spread beyond one.
  double previous = 2.0;
  for (double noise : {0.0, 0.02, 0.08}) {
    Config cfg;
    cfg.workers = 4;
    cfg.synth.noise_sigma = noise;
    cfg.synth.distractor_fraction = 0.0;
    cfg.synth.n_per_class = 20;
    cfg.synth.seed = 12;
    const auto r = classification_report(prepare_corpus(synth::corpus(cfg.synth), cfg), cfg);
    std::vector<Label> winners;
    for (const auto& p : r.predictions) {
      winners.push_back(kInteractionClasses[static_cast<std::size_t>(
          std::max_element(p.votes.begin(), p.votes.end()) - p.votes.begin())]);
    }
    const double f1 = cls_evaluate(winners, r.truth).macro_f1;
    CHECK(f1 <= previous);
    previous = f1;
  }
  CHECK(previous < 0.9);
}
