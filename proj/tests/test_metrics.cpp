#include "doctest.h"

#include <random>

#include "herdgraph/error.hpp"
#include "herdgraph/metrics.hpp"

using namespace herdgraph;

namespace {

// Independent per-class computation used as the oracle.
struct Hand {
  double accuracy = 0.0;
  double f1[3] = {0, 0, 0};
  std::size_t support[3] = {0, 0, 0};
  double macro = 0.0;
};

Hand hand_metrics(const std::vector<Label>& pred, const std::vector<Label>& truth) {
  Hand h;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const Label p = pred[i] == Label::InteractionPresent ? Label::NoInteraction : pred[i];
    correct += p == truth[i];
  }
  h.accuracy = static_cast<double>(correct) / static_cast<double>(pred.size());
  int with_support = 0;
  for (int c = 0; c < 3; ++c) {
    const Label l = static_cast<Label>(c);
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      tp += pred[i] == l && truth[i] == l;
      fp += pred[i] == l && truth[i] != l;
      fn += pred[i] != l && truth[i] == l;
    }
    h.support[c] = static_cast<std::size_t>(tp + fn);
    const double prec = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double rec = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    h.f1[c] = prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
    if (h.support[c] > 0) {
      h.macro += h.f1[c];
      ++with_support;
    }
  }
  if (with_support > 0) h.macro /= with_support;
  return h;
}

}  // namespace

TEST_CASE("all-correct predictions") {
  const std::vector<Label> t{Label::LickGroom, Label::Headbutt, Label::Displacement, Label::Headbutt};
  const auto r = cls_evaluate(t, t);
  CHECK(r.accuracy == 1.0);
  CHECK(r.macro_f1 == 1.0);
  for (std::size_t c = 0; c < 3; ++c) CHECK(r.per_class[c].f1 == 1.0);
}

TEST_CASE("one flip out of ten") {
  std::vector<Label> t(5, Label::LickGroom), p;
  t.insert(t.end(), 5, Label::Headbutt);
  p = t;
  p[0] = Label::Headbutt;
  const auto r = cls_evaluate(p, t);
  CHECK(r.accuracy == doctest::Approx(0.9));
  CHECK(r.confusion[0][1] == 1);
  CHECK(r.confusion[0][0] == 4);
  CHECK(r.per_class[0].support == 5);
  CHECK(r.macro_f1 == doctest::Approx((2 * 1.0 * 0.8 / 1.8 + 2 * (5.0 / 6.0) * 1.0 / (5.0 / 6.0 + 1.0)) / 2.0));
}

TEST_CASE("random labelings agree with the hand-rolled oracle") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> pick(0, 4), truth_pick(0, 3);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<Label> p, t;
    for (int i = 0; i < 40; ++i) {
      p.push_back(static_cast<Label>(pick(rng)));
      t.push_back(static_cast<Label>(truth_pick(rng)));
    }
    const auto r = cls_evaluate(p, t);
    const Hand h = hand_metrics(p, t);
    CHECK(r.accuracy == doctest::Approx(h.accuracy).epsilon(1e-15));
    CHECK(r.macro_f1 == doctest::Approx(h.macro).epsilon(1e-15));
    std::size_t total = 0;
    for (std::size_t row = 0; row < kConfusionSize; ++row) {
      std::size_t sum = 0;
      for (std::size_t col = 0; col < kConfusionSize; ++col) sum += r.confusion[row][col];
      CHECK(sum == r.per_class[row].support);
      total += sum;
    }
    CHECK(total == 40);
    for (int c = 0; c < 3; ++c) CHECK(r.per_class[static_cast<std::size_t>(c)].f1 == doctest::Approx(h.f1[c]).epsilon(1e-15));
  }
}

TEST_CASE("occurrence scoring") {
  const std::vector<Label> t{Label::LickGroom, Label::NoInteraction, Label::NoInteraction, Label::Headbutt};
  const std::vector<Label> p{Label::InteractionPresent, Label::InteractionPresent, Label::NoInteraction,
                             Label::NoInteraction};
  const auto r = occurrence_evaluate(p, t);
  CHECK(r.positives == 2);
  CHECK(r.negatives == 2);
  CHECK(r.precision == 0.5);
  CHECK(r.recall == 0.5);
  CHECK(r.false_positive_rate == 0.5);
}

TEST_CASE("valence collapses the agonistic classes") {
  const std::vector<Label> t{Label::Headbutt, Label::Displacement, Label::LickGroom, Label::LickGroom};
  const std::vector<Label> p{Label::Displacement, Label::Displacement, Label::LickGroom, Label::Headbutt};
  const auto r = valence_evaluate(p, t);
  CHECK(r.agonistic_recall == 1.0);
  CHECK(r.agonistic_precision == doctest::Approx(2.0 / 3.0));
  CHECK(r.affiliative_precision == 1.0);
  CHECK(r.affiliative_recall == 0.5);
}

TEST_CASE("length mismatch") {
  CHECK_THROWS_AS(cls_evaluate({Label::LickGroom}, {}), Error);
}
