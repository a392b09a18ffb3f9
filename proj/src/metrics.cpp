#include "herdgraph/metrics.hpp"

#include "herdgraph/error.hpp"

namespace herdgraph {

namespace {

std::size_t axis(Label l) {
  const auto i = static_cast<std::size_t>(l);
  return i < kNumClasses ? i : kNumClasses;
}

double safe_div(double a, double b) { return b > 0.0 ? a / b : 0.0; }

double f1_of(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

void check_lengths(const std::vector<Label>& predicted, const std::vector<Label>& truth) {
  if (predicted.size() != truth.size()) {
    throw data_error("LengthMismatch", std::to_string(predicted.size()) + " predictions for " +
                                           std::to_string(truth.size()) + " labels");
  }
}

}  // namespace

ClsReport cls_evaluate(const std::vector<Label>& predicted, const std::vector<Label>& truth) {
  check_lengths(predicted, truth);
  ClsReport r;
  r.total = truth.size();
  for (std::size_t i = 0; i < truth.size(); ++i) ++r.confusion[axis(truth[i])][axis(predicted[i])];
  std::size_t correct = 0;
  for (std::size_t c = 0; c < kConfusionSize; ++c) correct += r.confusion[c][c];
  r.accuracy = safe_div(static_cast<double>(correct), static_cast<double>(r.total));

  double f1_sum = 0.0;
  std::size_t f1_n = 0;
  for (std::size_t c = 0; c < kConfusionSize; ++c) {
    std::size_t tp = r.confusion[c][c], row = 0, col = 0;
    for (std::size_t k = 0; k < kConfusionSize; ++k) {
      row += r.confusion[c][k];
      col += r.confusion[k][c];
    }
    ClassMetrics& m = r.per_class[c];
    m.label = c < kNumClasses ? kInteractionClasses[c] : Label::NoInteraction;
    m.support = row;
    m.precision = safe_div(static_cast<double>(tp), static_cast<double>(col));
    m.recall = safe_div(static_cast<double>(tp), static_cast<double>(row));
    m.f1 = f1_of(m.precision, m.recall);
    if (c < kNumClasses && row > 0) {
      f1_sum += m.f1;
      ++f1_n;
    }
  }
  r.macro_f1 = safe_div(f1_sum, static_cast<double>(f1_n));
  return r;
}

OccurrenceReport occurrence_evaluate(const std::vector<Label>& predicted, const std::vector<Label>& truth) {
  check_lengths(predicted, truth);
  std::size_t tp = 0, fp = 0, fn = 0;
  OccurrenceReport r;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool t = truth[i] != Label::NoInteraction;
    const bool p = predicted[i] != Label::NoInteraction;
    (t ? r.positives : r.negatives) += 1;
    if (p && t) ++tp;
    if (p && !t) ++fp;
    if (!p && t) ++fn;
  }
  r.precision = safe_div(static_cast<double>(tp), static_cast<double>(tp + fp));
  r.recall = safe_div(static_cast<double>(tp), static_cast<double>(tp + fn));
  r.f1 = f1_of(r.precision, r.recall);
  r.false_positive_rate = safe_div(static_cast<double>(fp), static_cast<double>(r.negatives));
  return r;
}

ValenceReport valence_evaluate(const std::vector<Label>& predicted, const std::vector<Label>& truth) {
  check_lengths(predicted, truth);
  std::size_t aff_tp = 0, aff_pred = 0, aff_true = 0;
  std::size_t ago_tp = 0, ago_pred = 0, ago_true = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool ta = is_affiliative(truth[i]), tg = is_agonistic(truth[i]);
    const bool pa = is_affiliative(predicted[i]), pg = is_agonistic(predicted[i]);
    aff_true += ta;
    ago_true += tg;
    aff_pred += pa;
    ago_pred += pg;
    aff_tp += ta && pa;
    ago_tp += tg && pg;
  }
  ValenceReport r;
  r.affiliative_precision = safe_div(static_cast<double>(aff_tp), static_cast<double>(aff_pred));
  r.affiliative_recall = safe_div(static_cast<double>(aff_tp), static_cast<double>(aff_true));
  r.agonistic_precision = safe_div(static_cast<double>(ago_tp), static_cast<double>(ago_pred));
  r.agonistic_recall = safe_div(static_cast<double>(ago_tp), static_cast<double>(ago_true));
  return r;
}

}  // namespace herdgraph
