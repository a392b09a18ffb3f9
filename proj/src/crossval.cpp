#include "herdgraph/crossval.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <tuple>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "herdgraph/error.hpp"

namespace herdgraph {

namespace {

struct Group {
  std::string key;
  std::vector<std::size_t> members;
  std::array<int, kConfusionSize> class_counts{};
  std::vector<std::string> identities;
};

std::vector<std::string> identities_of(const std::string& key) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto bar = key.find('|', start);
    out.push_back(key.substr(start, bar - start));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return out;
}

std::size_t class_axis(Label l) {
  const auto i = static_cast<std::size_t>(l);
  return i < kNumClasses ? i : kNumClasses;
}

}  // namespace

std::vector<int> stratified_group_folds(const std::vector<Label>& labels,
                                        const std::vector<std::string>& groups, int k,
                                        std::uint64_t seed) {
  if (labels.size() != groups.size()) {
    throw data_error("LengthMismatch", "labels and groups differ in length");
  }
  if (k < 2) throw Error(ErrorKind::Config, "InvalidFolds", "fold count must be at least 2");

  std::map<std::string, Group> by_key;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Group& g = by_key[groups[i]];
    g.key = groups[i];
    g.members.push_back(i);
    ++g.class_counts[class_axis(labels[i])];
  }
  if (by_key.size() < static_cast<std::size_t>(k)) {
    throw data_error("TooFewGroups", std::to_string(by_key.size()) + " groups for " +
                                         std::to_string(k) + " folds");
  }

  std::vector<Group> order;
  for (auto& [key, g] : by_key) {
    g.identities = identities_of(key);
    order.push_back(std::move(g));
  }
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::stable_sort(order.begin(), order.end(),
                   [](const Group& a, const Group& b) { return a.members.size() > b.members.size(); });

  const std::size_t n = labels.size();
  const auto uk = static_cast<std::size_t>(k);
  const std::size_t capacity = (n + uk - 1) / uk;
  std::array<double, kConfusionSize> global{};
  for (Label l : labels) global[class_axis(l)] += 1.0 / static_cast<double>(n);

  std::vector<std::size_t> fold_size(uk, 0);
  std::vector<std::array<int, kConfusionSize>> fold_counts(uk);
  std::vector<std::set<std::string>> fold_ids(uk);
  std::vector<int> fold_of(n, -1);
  std::size_t empty_folds = uk;

  for (std::size_t gi = 0; gi < order.size(); ++gi) {
    const Group& g = order[gi];
    const std::size_t remaining = order.size() - gi;

    struct Score {
      int over;
      int conflicts;
      double strat;
      std::size_t size;
      std::size_t fold;
      bool operator<(const Score& o) const {
        return std::tie(over, conflicts, strat, size, fold) <
               std::tie(o.over, o.conflicts, o.strat, o.size, o.fold);
      }
    };
    std::optional<Score> best;
    for (std::size_t f = 0; f < uk; ++f) {
      // Every fold must receive at least one group.
      if (remaining <= empty_folds && fold_size[f] != 0) continue;
      Score s{};
      s.fold = f;
      s.size = fold_size[f];
      s.over = fold_size[f] + g.members.size() > capacity ? 1 : 0;
      for (const auto& id : g.identities) {
        for (std::size_t o = 0; o < uk; ++o) {
          if (o != f && fold_ids[o].count(id)) {
            ++s.conflicts;
            break;
          }
        }
      }
      const double after = static_cast<double>(fold_size[f] + g.members.size());
      for (std::size_t c = 0; c < kConfusionSize; ++c) {
        const double diff = fold_counts[f][c] + g.class_counts[c] - global[c] * after;
        s.strat += diff * diff;
      }
      if (!best || s < *best) best = s;
    }
    const std::size_t f = best->fold;
    if (fold_size[f] == 0) --empty_folds;
    fold_size[f] += g.members.size();
    for (std::size_t c = 0; c < kConfusionSize; ++c) fold_counts[f][c] += g.class_counts[c];
    fold_ids[f].insert(g.identities.begin(), g.identities.end());
    for (std::size_t m : g.members) fold_of[m] = static_cast<int>(f);
  }
  return fold_of;
}

CvResult cross_validate(const std::vector<LabeledClip>& clips, int k, const SvmParams& params,
                        const std::vector<std::size_t>& columns, std::vector<int> folds) {
  CvResult r;
  if (folds.empty()) {
    std::vector<Label> labels;
    std::vector<std::string> groups;
    for (const auto& c : clips) {
      labels.push_back(c.label);
      groups.push_back(c.group_key);
    }
    folds = stratified_group_folds(labels, groups, k, params.seed);
  }
  if (folds.size() != clips.size()) throw data_error("LengthMismatch", "fold vector size differs from clip count");
  r.folds = folds;
  r.predictions.resize(clips.size());
  for (int f = 0; f < k; ++f) {
    std::vector<LabeledClip> train_set;
    for (std::size_t i = 0; i < clips.size(); ++i) {
      if (folds[i] != f) train_set.push_back(clips[i]);
    }
    const SvmModel model = train(train_set, params, columns);
    for (std::size_t i = 0; i < clips.size(); ++i) {
      if (folds[i] == f) r.predictions[i] = model.predict(project(clips[i].features, columns));
    }
  }
  for (std::size_t i = 0; i < clips.size(); ++i) {
    r.predicted.push_back(r.predictions[i].label);
    r.truth.push_back(clips[i].label);
  }
  r.report = cls_evaluate(r.predicted, r.truth);
  return r;
}

}  // namespace herdgraph
