#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "herdgraph/core.hpp"
#include "herdgraph/metrics.hpp"
#include "herdgraph/svm.hpp"

namespace herdgraph {

/// Assigns each sample to one of k folds so that all samples sharing a group
/// key land in the same fold. Groups are placed largest first (seeded tie
/// order) into the fold that, in priority order, keeps fold sizes under
/// ceil(n/k), introduces the fewest identities already seen in other folds,
/// and best matches the global class proportions.
///
/// Group keys of the form "a|b" contribute identities a and b.
/// Throws Error(Data, "TooFewGroups") when there are fewer groups than folds.
std::vector<int> stratified_group_folds(const std::vector<Label>& labels,
                                        const std::vector<std::string>& groups, int k,
                                        std::uint64_t seed);

struct CvResult {
  std::vector<int> folds;
  std::vector<Prediction> predictions;  // out-of-fold, one per clip
  std::vector<Label> predicted;
  std::vector<Label> truth;
  ClsReport report;
};

/// Out-of-fold evaluation using the given feature columns. `folds` may be
/// supplied to share a split across runs; otherwise it is computed from the
/// clips' group keys.
CvResult cross_validate(const std::vector<LabeledClip>& clips, int k, const SvmParams& params,
                        const std::vector<std::size_t>& columns, std::vector<int> folds = {});

}  // namespace herdgraph
