#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>

#include "herdgraph/crossval.hpp"
#include "herdgraph/error.hpp"
#include "herdgraph/evalkit.hpp"
#include "herdgraph/svm.hpp"

using namespace herdgraph;

namespace {

// Reference dual solver for the oracle tests: projected gradient with a
// bisection projection onto the box and the equality constraint.
std::vector<double> project(std::vector<double> v, const std::vector<double>& y, const std::vector<double>& c) {
  auto sum_at = [&](double lam) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += std::clamp(v[i] - lam * y[i], 0.0, c[i]) * y[i];
    return s;
  };
  double lo = -1e6, hi = 1e6;
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    (sum_at(mid) > 0.0 ? lo : hi) = mid;
  }
  const double lam = 0.5 * (lo + hi);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::clamp(v[i] - lam * y[i], 0.0, c[i]);
  return v;
}

double oracle_objective(const Eigen::MatrixXd& k, const std::vector<double>& y, const std::vector<double>& c) {
  const auto n = static_cast<Eigen::Index>(y.size());
  Eigen::MatrixXd q(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) q(i, j) = y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)] * k(i, j);
  const double step = 1.0 / Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q).eigenvalues().maxCoeff();
  std::vector<double> a(static_cast<std::size_t>(n), 0.0);
  for (int it = 0; it < 40000; ++it) {
    const Eigen::VectorXd g = q * Eigen::Map<Eigen::VectorXd>(a.data(), n) - Eigen::VectorXd::Ones(n);
    std::vector<double> v(a);
    for (Eigen::Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= step * g(i);
    a = project(v, y, c);
  }
  const Eigen::Map<Eigen::VectorXd> av(a.data(), n);
  return av.sum() - 0.5 * av.dot(q * av);
}

struct Toy {
  std::vector<std::vector<double>> x;
  std::vector<Label> y;
};

Toy separable() {
  Toy t;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const bool pos = i % 2 == 0;
    t.x.push_back({u(rng) + (pos ? 3.0 : -3.0), u(rng)});
    t.y.push_back(pos ? Label::LickGroom : Label::Headbutt);
  }
  return t;
}

Label top_voted(const SvmModel& m, const Prediction& p) {
  return m.classes[static_cast<std::size_t>(std::max_element(p.votes.begin(), p.votes.end()) - p.votes.begin())];
}

}  // namespace

TEST_CASE("separable toy: training accuracy and margins") {
  const Toy t = separable();
  const SvmModel m = train(t.x, t.y, SvmParams{});
  REQUIRE(m.machines.size() == 1);
  const BinaryMachine& bm = m.machines[0];
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    const auto z = m.scaler.transform(t.x[i]);
    CHECK(m.predict(t.x[i]).label == t.y[i]);
    bool is_sv = false;
    for (std::size_t s = 0; s < bm.support_count(); ++s) {
      is_sv = is_sv || (bm.support_vectors[2 * s] == z[0] && bm.support_vectors[2 * s + 1] == z[1]);
    }
    if (!is_sv) CHECK(std::abs(bm.decision(z, m.gamma)) >= 1.0 - 1e-3);
  }
}

TEST_CASE("support vectors predict their own class above the reject threshold") {
  const Toy t = separable();
  const SvmModel m = train(t.x, t.y, SvmParams{});
  const BinaryMachine& bm = m.machines[0];
  REQUIRE(bm.support_count() > 0);
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    const auto z = m.scaler.transform(t.x[i]);
    for (std::size_t s = 0; s < bm.support_count(); ++s) {
      if (bm.support_vectors[2 * s] != z[0] || bm.support_vectors[2 * s + 1] != z[1]) continue;
      const Prediction p = m.predict(t.x[i]);
      CHECK(p.label == t.y[i]);
      CHECK(p.confidence > m.reject_threshold);
    }
  }
}

TEST_CASE("RBF separates XOR") {
  const std::vector<std::vector<double>> x{{0, 0}, {1, 1}, {0, 1}, {1, 0}};
  const std::vector<Label> y{Label::LickGroom, Label::LickGroom, Label::Headbutt, Label::Headbutt};
  SvmParams p;
  p.C = 100.0;
  const SvmModel m = train(x, y, p);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto z = m.scaler.transform(x[i]);
    const double f = m.machines[0].decision(z, m.gamma);
    CHECK((y[i] == Label::LickGroom ? f > 0.0 : f < 0.0));
  }
}

TEST_CASE("SMO matches a projected-gradient reference and satisfies KKT") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int inst = 0; inst < 12; ++inst) {
    const std::size_t n = 8 + 3 * static_cast<std::size_t>(inst);
    std::vector<double> x(n * 3), y(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = g(rng) > 0.0 ? 1.0 : -1.0;
      if (i < 2) y[i] = i == 0 ? 1.0 : -1.0;
      for (std::size_t d = 0; d < 3; ++d) x[i * 3 + d] = g(rng) + 0.5 * y[i];
      c[i] = y[i] > 0 ? 2.0 : 5.0;
    }
    const auto k = rbf_gram(x, 3, 0.4);
    const SmoSolution s = smo_solve(k, y, c);
    CHECK(s.converged);
    const double ref = oracle_objective(k, y, c);
    CHECK(s.objective >= ref - 1e-3 * std::abs(ref));
    CHECK(s.objective == doctest::Approx(dual_objective(k, y, s.alpha)).epsilon(1e-9));
    double eq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double f = s.bias;
      for (std::size_t j = 0; j < n; ++j)
        f += s.alpha[j] * y[j] * k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const double yf = y[i] * f;
      CHECK(s.alpha[i] >= 0.0);
      CHECK(s.alpha[i] <= c[i]);
      if (s.alpha[i] == 0.0) CHECK(yf >= 1.0 - 1e-3);
      else if (s.alpha[i] == c[i]) CHECK(yf <= 1.0 + 1e-3);
      else CHECK(std::abs(yf - 1.0) <= 1e-3);
      eq += s.alpha[i] * y[i];
    }
    CHECK(std::abs(eq) <= 1e-6);
  }
}

TEST_CASE("zero decision value goes to the first class at confidence one half") {
  SvmModel m;
  m.input_dim = 1;
  m.scaler = {{0.0}, {1.0}, {0}};
  m.classes = {Label::LickGroom, Label::Headbutt};
  m.class_weights = {1.0, 1.0};
  m.machines.push_back({Label::LickGroom, Label::Headbutt, {}, {}, 0.0});
  const Prediction p = m.predict(std::vector<double>{3.0});
  CHECK(p.votes == std::vector<int>{1, 0});
  CHECK(p.confidence == 0.5);
  CHECK(p.label == Label::LickGroom);
  m.reject_threshold = 0.51;
  CHECK(m.predict(std::vector<double>{3.0}).label == Label::NoInteraction);
}

TEST_CASE("confidence is the winner's vote share times the logistic of its mean margin") {
  SvmModel m;
  m.input_dim = 1;
  m.scaler = {{0.0}, {1.0}, {0}};
  m.classes = {Label::LickGroom, Label::Headbutt, Label::Displacement};
  m.class_weights = {1.0, 1.0, 1.0};
  // Constant machines: LG beats HB by 2, LG beats DP by 1, HB beats DP by 0.5.
  m.machines.push_back({Label::LickGroom, Label::Headbutt, {}, {}, 2.0});
  m.machines.push_back({Label::LickGroom, Label::Displacement, {}, {}, 1.0});
  m.machines.push_back({Label::Headbutt, Label::Displacement, {}, {}, 0.5});
  m.reject_threshold = 0.0;
  const Prediction p = m.predict(std::vector<double>{0.0});
  CHECK(p.votes == std::vector<int>{2, 1, 0});
  CHECK(p.mean_margins[0] == doctest::Approx(1.5));
  CHECK(p.mean_margins[1] == doctest::Approx((-2.0 + 0.5) / 2.0));
  CHECK(p.confidence == doctest::Approx(2.0 / 3.0 / (1.0 + std::exp(-1.5))));
  CHECK(p.label == Label::LickGroom);
}

TEST_CASE("predict is pure and checks dimensions") {
  const Toy t = separable();
  const SvmModel m = train(t.x, t.y, SvmParams{});
  const auto a = m.predict(t.x[3]), b = m.predict(t.x[3]);
  CHECK(a.confidence == b.confidence);
  CHECK(a.mean_margins == b.mean_margins);
  CHECK_THROWS_AS(m.predict(std::vector<double>{1.0, 2.0, 3.0}), Error);
}

TEST_CASE("training is invariant to per-feature affine rescaling") {
  Toy t = separable();
  Toy s = t;
  for (auto& row : s.x) {
    row[0] = 40.0 * row[0] - 7.0;
    row[1] = 0.01 * row[1] + 3.0;
  }
  SvmParams p;
  p.tol = 1e-10;
  const SvmModel a = train(t.x, t.y, p), b = train(s.x, s.y, p);
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    const auto pa = a.predict(t.x[i]), pb = b.predict(s.x[i]);
    CHECK(pa.label == pb.label);
    CHECK(pa.confidence == doctest::Approx(pb.confidence).epsilon(1e-6));
  }
}

TEST_CASE("balanced weights and gamma scale") {
  std::vector<std::vector<double>> x;
  std::vector<Label> y;
  for (int i = 0; i < 12; ++i) {
    x.push_back({static_cast<double>(i), static_cast<double>(i % 5)});
    y.push_back(i < 8 ? Label::LickGroom : Label::Displacement);
  }
  const SvmModel m = train(x, y, SvmParams{});
  REQUIRE(m.classes == std::vector<Label>{Label::LickGroom, Label::Displacement});
  CHECK(m.class_weights[0] == doctest::Approx(12.0 / (2.0 * 8.0)));
  CHECK(m.class_weights[1] == doctest::Approx(12.0 / (2.0 * 4.0)));
  // Standardized entries have variance 1, so gamma = 1 / F.
  CHECK(m.gamma == doctest::Approx(0.5));
}

TEST_CASE("degenerate training data") {
  const std::vector<std::vector<double>> x{{1, 2}, {2, 3}, {3, 1}};
  CHECK_THROWS_AS(train(x, {Label::LickGroom, Label::LickGroom, Label::LickGroom}, SvmParams{}), Error);
  CHECK_THROWS_AS(train(x, {Label::LickGroom, Label::LickGroom, Label::Headbutt}, SvmParams{}), Error);
  const std::vector<std::vector<double>> flat{{1, 1}, {1, 1}, {1, 1}, {1, 1}};
  const std::vector<Label> y{Label::LickGroom, Label::LickGroom, Label::Headbutt, Label::Headbutt};
  CHECK_THROWS_AS(train(flat, y, SvmParams{}), Error);
  const std::vector<std::vector<double>> one_const{{1, 5}, {2, 5}, {3, 5}, {4, 5}};
  std::vector<std::size_t> dropped;
  const SvmModel m = train(one_const, y, SvmParams{}, &dropped);
  CHECK(dropped == std::vector<std::size_t>{1});
  CHECK(m.scaler.active == std::vector<std::size_t>{0});
}

TEST_CASE("proximity baseline") {
  CHECK(baseline_predict(false, BaselineVariant::Majority, Label::LickGroom).label == Label::NoInteraction);
  CHECK(baseline_predict(true, BaselineVariant::Majority, Label::LickGroom).label == Label::LickGroom);
  CHECK(baseline_predict(true, BaselineVariant::Occurrence, Label::LickGroom).label == Label::InteractionPresent);
  CHECK(majority_label({Label::Headbutt, Label::LickGroom, Label::Headbutt}) == Label::Headbutt);
  CHECK(majority_label({Label::Displacement, Label::LickGroom}) == Label::LickGroom);
}

TEST_CASE("one group per fold") {
  const std::vector<Label> y(5, Label::LickGroom);
  const auto folds = stratified_group_folds(y, {"g1", "g2", "g3", "g4", "g5"}, 5, 1);
  CHECK(std::set<int>(folds.begin(), folds.end()).size() == 5);
}

TEST_CASE("a single group cannot be split") {
  const std::vector<Label> y(6, Label::Headbutt);
  CHECK_THROWS_AS(stratified_group_folds(y, std::vector<std::string>(6, "A|B"), 5, 1), Error);
  CHECK_THROWS_AS(stratified_group_folds(y, {"a", "b", "c", "d", "e", "f"}, 1, 1), Error);
}

TEST_CASE("corpus folds never split a dyad and balance classes") {
  synth::CorpusSpec spec;
  spec.distractor_fraction = 0.0;
  const auto entries = synth::corpus(spec);
  REQUIRE(entries.size() == 150);
  std::vector<Label> labels;
  std::vector<std::string> groups;
  for (const auto& e : entries) {
    labels.push_back(e.label);
    groups.push_back(group_key(e.spec.identity_a, e.spec.identity_b));
  }
  CHECK(std::set<std::string>(groups.begin(), groups.end()).size() == 15);
  const auto folds = stratified_group_folds(labels, groups, 5, 3);
  std::map<std::string, std::set<int>> seen;
  for (std::size_t i = 0; i < folds.size(); ++i) seen[groups[i]].insert(folds[i]);
  for (const auto& [g, f] : seen) CHECK(f.size() == 1);
  for (int f = 0; f < 5; ++f) {
    const auto size = std::count(folds.begin(), folds.end(), f);
    CHECK(size > 0);
  }
}

// Top-voted class before rejection; every fold model here holds all three classes.
double winner_accuracy(const CvResult& r) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < r.truth.size(); ++i) {
    const auto& v = r.predictions[i].votes;
    REQUIRE(v.size() == kNumClasses);
    const auto best = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    hit += kInteractionClasses[best] == r.truth[i];
  }
  return static_cast<double>(hit) / static_cast<double>(r.truth.size());
}

void check_reject_rule(const CvResult& r, double threshold) {
  for (std::size_t i = 0; i < r.predictions.size(); ++i) {
    CHECK((r.predicted[i] == Label::NoInteraction) == (r.predictions[i].confidence < threshold));
  }
}

TEST_CASE("cross-validation pools out-of-fold predictions") {
  std::vector<LabeledClip> clips;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 0.1);
  const Label classes[] = {Label::LickGroom, Label::Headbutt, Label::Displacement};
  for (int i = 0; i < 60; ++i) {
    LabeledClip c;
    const int k = i % 3;
    for (std::size_t d = 0; d < kFeatureDim; ++d) c.features[d] = (d % 3 == static_cast<std::size_t>(k) ? 3.0 : 0.0) + g(rng);
    c.label = classes[k];
    c.group_key = "g" + std::to_string(i % 10);
    clips.push_back(c);
  }
  const CvResult r = cross_validate(clips, 5, SvmParams{}, feature_columns(FeatureSet::Full));
  CHECK(r.predicted.size() == 60);
  CHECK(r.report.total == 60);
  CHECK(winner_accuracy(r) > 0.9);
  check_reject_rule(r, SvmParams{}.reject_threshold);
}

TEST_CASE("held-out synthetic clips in the separable regime") {
  Config cfg;
  cfg.synth.noise_sigma = 0.0;
  cfg.synth.occlusion_rate = 0.0;
  cfg.synth.distractor_fraction = 0.0;
  cfg.synth.n_per_class = 20;
  cfg.synth.seed = 12;
  cfg.workers = 4;
  const auto clips = prepare_corpus(synth::corpus(cfg.synth), cfg);
  const CvResult r = classification_report(clips, cfg);
  CHECK(winner_accuracy(r) >= 0.90);
  check_reject_rule(r, cfg.svm.reject_threshold);
}
