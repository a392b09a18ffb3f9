#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "herdgraph/core.hpp"

namespace herdgraph {

/// Confusion axes: the three interaction classes followed by NoInteraction.
inline constexpr std::size_t kConfusionSize = kNumClasses + 1;

struct ClassMetrics {
  Label label = Label::LickGroom;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct ClsReport {
  std::size_t total = 0;
  double accuracy = 0.0;
  std::array<ClassMetrics, kConfusionSize> per_class{};
  /// Unweighted mean F1 over interaction classes with nonzero support.
  double macro_f1 = 0.0;
  /// confusion[truth][predicted]. A bare InteractionPresent prediction names no
  /// class, so it is tallied in the NoInteraction column.
  std::array<std::array<std::size_t, kConfusionSize>, kConfusionSize> confusion{};
};

/// Throws Error(Data, "LengthMismatch") when the sizes differ.
ClsReport cls_evaluate(const std::vector<Label>& predicted, const std::vector<Label>& truth);

/// Interaction-vs-none scoring: any interaction class or InteractionPresent is
/// a positive prediction; truth is positive unless NoInteraction.
struct OccurrenceReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double false_positive_rate = 0.0;  // over truth-negative samples
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

OccurrenceReport occurrence_evaluate(const std::vector<Label>& predicted, const std::vector<Label>& truth);

/// Affiliative (LickGroom) vs agonistic (Headbutt, Displacement) precision and
/// recall, collapsing the two agonistic classes.
struct ValenceReport {
  double affiliative_precision = 0.0;
  double affiliative_recall = 0.0;
  double agonistic_precision = 0.0;
  double agonistic_recall = 0.0;
};

ValenceReport valence_evaluate(const std::vector<Label>& predicted, const std::vector<Label>& truth);

}  // namespace herdgraph
