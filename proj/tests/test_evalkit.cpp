#include "doctest.h"

#include "herdgraph/error.hpp"
#include "herdgraph/evalkit.hpp"
#include "herdgraph/synthlab.hpp"

using namespace herdgraph;

namespace {

BBox box_at(double x) { return {x, 0.0, x + 10.0, 10.0}; }

std::vector<GroundTruthFrame> two_objects(int frames) {
  std::vector<GroundTruthFrame> gt;
  for (int f = 0; f < frames; ++f) gt.push_back({f, {{"A", box_at(0)}, {"B", box_at(100)}}});
  return gt;
}

std::vector<TrackedFrame> tracked_copy(const std::vector<GroundTruthFrame>& gt) {
  std::vector<TrackedFrame> out;
  for (const auto& g : gt) {
    TrackedFrame t{g.frame_index, {}};
    TrackId id = 1;
    for (const auto& [name, b] : g.boxes) t.boxes.push_back({id++, b});
    out.push_back(t);
  }
  return out;
}

}  // namespace

TEST_CASE("perfect tracking") {
  const auto gt = two_objects(10);
  const auto r = mot_evaluate(gt, tracked_copy(gt));
  CHECK(r.mota == 1.0);
  CHECK(r.idf1 == 1.0);
  CHECK(r.tracking_accuracy == 1.0);
  CHECK(r.id_switches == 0);
  CHECK(r.total_tracks == 2);
  CHECK(r.gt_boxes == 20);
}

TEST_CASE("a single miss") {
  const auto gt = two_objects(10);
  auto tr = tracked_copy(gt);
  tr[4].boxes.pop_back();
  const auto r = mot_evaluate(gt, tr);
  CHECK(r.false_negatives == 1);
  CHECK(r.false_positives == 0);
  CHECK(r.mota == doctest::Approx(1.0 - 1.0 / 20.0));
  CHECK(r.fragments == 1);
  CHECK(r.tracking_accuracy == doctest::Approx(19.0 / 20.0));
}

TEST_CASE("an identity swap halfway") {
  const auto gt = two_objects(10);
  auto tr = tracked_copy(gt);
  for (int f = 5; f < 10; ++f) std::swap(tr[static_cast<std::size_t>(f)].boxes[0].id, tr[static_cast<std::size_t>(f)].boxes[1].id);
  const auto r = mot_evaluate(gt, tr);
  CHECK(r.id_switches == 2);
  CHECK(r.mota == doctest::Approx(1.0 - 2.0 / 20.0));
  CHECK(r.idf1 == doctest::Approx(0.5));
}

TEST_CASE("a spurious box is a false positive") {
  const auto gt = two_objects(4);
  auto tr = tracked_copy(gt);
  tr[0].boxes.push_back({7, box_at(500)});
  const auto r = mot_evaluate(gt, tr);
  CHECK(r.false_positives == 1);
  CHECK(r.mota == doctest::Approx(1.0 - 1.0 / 8.0));
}

TEST_CASE("disjoint ranges are rejected") {
  const auto gt = two_objects(3);
  std::vector<TrackedFrame> tr = {{100, {{1, box_at(0)}}}};
  try {
    mot_evaluate(gt, tr);
    FAIL("expected NoOverlap");
  } catch (const Error& e) {
    CHECK(e.code() == "NoOverlap");
  }
}

TEST_CASE("match-threshold sweep on clean detections") {
  synth::ScenarioSpec s;
  s.tmpl = synth::Template::Displacement;
  s.duration_s = 6.0;
  s.seed = 2;
  const auto clip = synth::generate(s);
  const auto gt = ground_truth_from_identities(clip.frames, 5);
  CHECK(gt.size() == 36);
  const auto rows = match_threshold_sweep(gt, clip.frames, clip.meta, TrackerConfig{}, {0.3, 0.5, 0.7}, 0.5, 2);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.report.tracking_accuracy == 1.0);
    CHECK(r.report.id_switches == 0);
  }
  CHECK(sweep_csv(rows).find("0.7") != std::string::npos);
}

TEST_CASE("small sensitivity grid is deterministic across worker counts") {
  Config cfg;
  cfg.synth.n_per_class = 6;
  cfg.synth.roster = {"A", "B", "C", "D"};
  cfg.synth.seed = 13;
  cfg.eval.alphas = {0.30, 0.40};
  cfg.eval.dwells_s = {3.0, 5.0};
  cfg.eval.folds = 3;
  cfg.workers = 1;
  const auto clips = prepare_corpus(synth::corpus(cfg.synth), cfg);
  const auto a = sensitivity(clips, cfg);
  cfg.workers = 3;
  const auto b = sensitivity(clips, cfg);
  REQUIRE(a.size() == 4);
  CHECK(sensitivity_csv(a) == sensitivity_csv(b));
  CHECK(a[0].alpha == 0.30);
  CHECK(a[0].dwell_s == 3.0);
  CHECK(a[1].dwell_s == 5.0);
  for (const auto& c : a) {
    CHECK(c.labeled == 18);
    CHECK(c.surviving_labeled <= c.candidates);
  }
  // A longer dwell never admits more clips.
  CHECK(a[1].candidates <= a[0].candidates);
  CHECK(a[3].candidates <= a[2].candidates);
}

TEST_CASE("reject sweep rescoring") {
  BaselineComparison c;
  c.truth = {Label::LickGroom, Label::Headbutt, Label::NoInteraction, Label::Displacement};
  c.svm_winners = {Label::LickGroom, Label::Headbutt, Label::Displacement, Label::Displacement};
  c.svm_confidence = {0.9, 0.4, 0.6, 0.7};
  const auto rows = reject_sweep(c, {0.0, 0.5, 0.8});
  REQUIRE(rows.size() == 3);
  // Nothing rejected: the distractor is a false positive.
  CHECK(rows[0].accuracy == doctest::Approx(0.75));
  CHECK(rows[0].false_positive_rate == doctest::Approx(1.0));
  // 0.5 rejects the headbutt, 0.8 also rejects the distractor and the displacement.
  CHECK(rows[1].accuracy == doctest::Approx(0.5));
  CHECK(rows[2].accuracy == doctest::Approx(0.5));
  CHECK(rows[2].false_positive_rate == 0.0);
  CHECK(reject_csv(rows).rfind("reject_threshold", 0) == 0);
}
