#include "herdgraph/evalkit.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "herdgraph/assignment.hpp"
#include "herdgraph/dyad.hpp"
#include "herdgraph/error.hpp"
#include "herdgraph/io.hpp"
#include "herdgraph/parallel.hpp"

namespace herdgraph {

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

// ------------------------------------------------------------------ MOT

MotReport mot_evaluate(const std::vector<GroundTruthFrame>& gt, const std::vector<TrackedFrame>& tracked,
                       double iou_gate) {
  std::map<std::int64_t, const TrackedFrame*> by_frame;
  std::set<TrackId> ids;
  MotReport r;
  for (const TrackedFrame& f : tracked) {
    by_frame[f.frame_index] = &f;
    for (const TrackBox& b : f.boxes) ids.insert(b.id);
    if (!f.boxes.empty()) ++r.tracked_frames;
  }
  r.total_tracks = ids.size();
  bool overlap = false;
  if (!by_frame.empty()) {
    const auto lo = by_frame.begin()->first, hi = by_frame.rbegin()->first;
    for (const auto& g : gt) overlap |= g.frame_index >= lo && g.frame_index <= hi;
  }
  if (!overlap) throw data_error("NoOverlap", "ground truth and tracker output share no frames");

  std::vector<const GroundTruthFrame*> frames;
  for (const auto& g : gt) frames.push_back(&g);
  std::stable_sort(frames.begin(), frames.end(),
                   [](const auto* a, const auto* b) { return a->frame_index < b->frame_index; });

  std::map<std::string, TrackId> last_match;
  std::map<std::string, bool> was_matched;  // at the object's previous annotation
  std::map<std::pair<std::string, TrackId>, std::size_t> cooccur;
  std::map<std::string, std::size_t> gt_count;
  std::map<TrackId, std::size_t> pred_count;
  std::size_t pred_total = 0;
  const std::vector<TrackBox> none;

  for (const GroundTruthFrame* g : frames) {
    auto it = by_frame.find(g->frame_index);
    const std::vector<TrackBox>& boxes = it == by_frame.end() ? none : it->second->boxes;
    const std::size_t ng = g->boxes.size(), nt = boxes.size();
    r.gt_boxes += ng;
    pred_total += nt;
    for (const auto& b : boxes) ++pred_count[b.id];

    std::vector<long> match_of(ng, -1);
    std::vector<bool> used(nt, false);
    for (std::size_t i = 0; i < ng; ++i) {
      const auto& [name, box] = g->boxes[i];
      ++gt_count[name];
      for (std::size_t j = 0; j < nt; ++j) {
        if (iou(box, boxes[j].box) >= iou_gate) ++cooccur[{name, boxes[j].id}];
      }
      auto prev = last_match.find(name);
      if (prev == last_match.end()) continue;
      for (std::size_t j = 0; j < nt; ++j) {
        if (!used[j] && boxes[j].id == prev->second && iou(box, boxes[j].box) >= iou_gate) {
          match_of[i] = static_cast<long>(j);
          used[j] = true;
          break;
        }
      }
    }
    std::vector<std::size_t> rows, cols;
    for (std::size_t i = 0; i < ng; ++i) {
      if (match_of[i] < 0) rows.push_back(i);
    }
    for (std::size_t j = 0; j < nt; ++j) {
      if (!used[j]) cols.push_back(j);
    }
    if (!rows.empty() && !cols.empty()) {
      Eigen::MatrixXd cost(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t b = 0; b < cols.size(); ++b) {
          cost(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
              1.0 - iou(g->boxes[rows[a]].second, boxes[cols[b]].box);
        }
      }
      const auto sol = solve_min_cost(cost);
      for (std::size_t a = 0; a < rows.size(); ++a) {
        if (sol[a] < 0) continue;
        const std::size_t j = cols[static_cast<std::size_t>(sol[a])];
        if (iou(g->boxes[rows[a]].second, boxes[j].box) >= iou_gate) match_of[rows[a]] = static_cast<long>(j);
      }
    }
    for (std::size_t i = 0; i < ng; ++i) {
      const std::string& name = g->boxes[i].first;
      const bool matched = match_of[i] >= 0;
      if (matched) {
        ++r.matches;
        const TrackId id = boxes[static_cast<std::size_t>(match_of[i])].id;
        auto prev = last_match.find(name);
        if (prev != last_match.end()) {
          if (prev->second != id) ++r.id_switches;
          if (!was_matched[name]) ++r.fragments;
        }
        last_match[name] = id;
      }
      was_matched[name] = matched;
    }
  }
  r.false_negatives = r.gt_boxes - r.matches;
  r.false_positives = pred_total - r.matches;
  if (r.gt_boxes > 0) {
    const double g = static_cast<double>(r.gt_boxes);
    r.tracking_accuracy = static_cast<double>(r.matches) / g;
    r.mota = 1.0 - static_cast<double>(r.false_negatives + r.false_positives + r.id_switches) / g;
  }

  // Global identity matching maximizing co-occurring matches.
  std::vector<std::string> gt_ids;
  std::vector<TrackId> tr_ids;
  for (const auto& [name, n] : gt_count) gt_ids.push_back(name);
  for (const auto& [id, n] : pred_count) tr_ids.push_back(id);
  std::size_t idtp = 0;
  if (!gt_ids.empty() && !tr_ids.empty()) {
    Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(gt_ids.size()),
                                                 static_cast<Eigen::Index>(tr_ids.size()));
    for (const auto& [key, n] : cooccur) {
      const auto gi = std::lower_bound(gt_ids.begin(), gt_ids.end(), key.first) - gt_ids.begin();
      const auto ti = std::lower_bound(tr_ids.begin(), tr_ids.end(), key.second) - tr_ids.begin();
      cost(gi, ti) = -static_cast<double>(n);
    }
    const auto sol = solve_min_cost(cost);
    for (std::size_t i = 0; i < sol.size(); ++i) {
      if (sol[i] >= 0) idtp += static_cast<std::size_t>(-cost(static_cast<Eigen::Index>(i), sol[i]));
    }
  }
  const std::size_t denom = r.gt_boxes + pred_total;
  r.idf1 = denom > 0 ? 2.0 * static_cast<double>(idtp) / static_cast<double>(denom) : 0.0;
  return r;
}

std::vector<TrackedFrame> tracked_frames(const std::vector<Track>& tracks, std::size_t min_samples) {
  std::map<std::int64_t, TrackedFrame> out;
  for (const Track& t : tracks) {
    if (t.history.size() < min_samples) continue;
    for (const TrackSample& s : t.history) {
      TrackedFrame& f = out[s.frame_index];
      f.frame_index = s.frame_index;
      f.boxes.push_back({t.id, s.box});
    }
  }
  std::vector<TrackedFrame> v;
  for (auto& [k, f] : out) v.push_back(std::move(f));
  return v;
}

std::vector<GroundTruthFrame> ground_truth_from_identities(const std::vector<FrameRecord>& frames,
                                                           std::int64_t every) {
  std::vector<GroundTruthFrame> gt;
  if (frames.empty()) return gt;
  const std::int64_t first = frames.front().frame_index;
  for (const FrameRecord& f : frames) {
    if (every > 1 && (f.frame_index - first) % every != 0) continue;
    GroundTruthFrame g;
    g.frame_index = f.frame_index;
    for (const Detection& d : f.detections) {
      if (d.identity) g.boxes.emplace_back(*d.identity, d.bbox);
    }
    gt.push_back(std::move(g));
  }
  return gt;
}

std::vector<SweepRow> match_threshold_sweep(const std::vector<GroundTruthFrame>& gt,
                                            const std::vector<FrameRecord>& detections, const StreamMeta& meta,
                                            const TrackerConfig& base, const std::vector<double>& thresholds,
                                            double iou_gate, int workers) {
  std::vector<SweepRow> rows(thresholds.size());
  parallel_for(thresholds.size(), workers, [&](std::size_t i) {
    TrackerConfig cfg = base;
    cfg.match_threshold = thresholds[i];
    const auto tracks = track_stream(detections, cfg, meta);
    rows[i].threshold = thresholds[i];
    rows[i].report = mot_evaluate(gt, tracked_frames(tracks, static_cast<std::size_t>(cfg.confirm_hits)), iou_gate);
  });
  return rows;
}

std::string mot_csv(const MotReport& r) {
  return io::to_csv({"tracking_accuracy", "mota", "idf1", "id_switches", "total_tracks", "tracked_frames",
                     "fragments", "gt_boxes", "matches", "false_positives", "false_negatives"},
                    {{io::format_double(r.tracking_accuracy), io::format_double(r.mota), io::format_double(r.idf1),
                      std::to_string(r.id_switches), std::to_string(r.total_tracks), std::to_string(r.tracked_frames),
                      std::to_string(r.fragments), std::to_string(r.gt_boxes), std::to_string(r.matches),
                      std::to_string(r.false_positives), std::to_string(r.false_negatives)}});
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::vector<std::vector<std::string>> body;
  for (const auto& s : rows) {
    body.push_back({io::format_double(s.threshold), io::format_double(s.report.tracking_accuracy),
                    std::to_string(s.report.total_tracks), std::to_string(s.report.tracked_frames),
                    io::format_double(s.report.mota), io::format_double(s.report.idf1),
                    std::to_string(s.report.id_switches)});
  }
  return io::to_csv({"match_threshold", "tracking_accuracy", "total_tracks", "tracked_frames", "mota", "idf1",
                     "id_switches"},
                    body);
}

// ------------------------------------------------------------------ corpus

std::vector<PreparedClip> prepare_corpus(const std::vector<synth::CorpusEntry>& entries, const Config& cfg) {
  std::vector<PreparedClip> out(entries.size());
  parallel_for(entries.size(), cfg.workers, [&](std::size_t i) {
    const synth::SyntheticClip clip = synth::generate(entries[i].spec);
    PreparedClip& p = out[i];
    p.entry = entries[i];
    p.meta = clip.meta;
    p.poses = stabilize_all(track_stream(clip.frames, cfg.tracker, clip.meta), cfg.smoother);
  });
  return out;
}

std::optional<std::pair<const PoseTrack*, const PoseTrack*>> dyad_tracks(const PreparedClip& clip) {
  auto longer = [](const PoseTrack* a, const PoseTrack* b) {
    if (!a) return true;
    return b->frames.size() > a->frames.size();
  };
  const PoseTrack* a = nullptr;
  const PoseTrack* b = nullptr;
  for (const PoseTrack& p : clip.poses) {
    if (p.identity == clip.entry.spec.identity_a && longer(a, &p)) a = &p;
    if (p.identity == clip.entry.spec.identity_b && longer(b, &p)) b = &p;
  }
  if (!a || !b) {
    std::vector<const PoseTrack*> order;
    for (const PoseTrack& p : clip.poses) order.push_back(&p);
    std::stable_sort(order.begin(), order.end(),
                     [](const auto* x, const auto* y) { return x->frames.size() > y->frames.size(); });
    if (order.size() < 2) return std::nullopt;
    a = order[0];
    b = order[1];
  }
  if (a->track_id > b->track_id) std::swap(a, b);
  return std::make_pair(a, b);
}

std::optional<FeatureVector> clip_features(const PreparedClip& clip, const GateConfig& gate,
                                           const FeatureConfig& features) {
  const auto pair = dyad_tracks(clip);
  if (!pair) return std::nullopt;
  const auto window = longest_segment(*pair->first, *pair->second, gate, clip.meta);
  if (!window) return std::nullopt;
  try {
    return extract(*window, clip.meta.fps, features);
  } catch (const Error& e) {
    if (e.code() != "InsufficientData") throw;
    return std::nullopt;
  }
}

std::vector<int> corpus_folds(const std::vector<PreparedClip>& clips, int k, std::uint64_t seed) {
  std::vector<Label> labels;
  std::vector<std::string> groups;
  for (const auto& c : clips) {
    labels.push_back(c.entry.label);
    groups.push_back(group_key(c.entry.spec.identity_a, c.entry.spec.identity_b));
  }
  return stratified_group_folds(labels, groups, k, seed);
}

namespace {

struct Oof {
  std::vector<Prediction> predictions;
  std::vector<Label> predicted;
  std::vector<Label> winners;  // top-voted class before rejection
  bool defined = true;
};

// Out-of-fold predictions. Training uses interaction clips with features;
// clips without features are predicted NoInteraction. A fold whose training
// set is degenerate predicts NoInteraction and marks the result undefined.
Oof out_of_fold(const std::vector<std::optional<FeatureVector>>& feats, const std::vector<Label>& labels,
                const std::vector<int>& folds, int k, const SvmParams& params,
                const std::vector<std::size_t>& columns) {
  Oof r;
  r.predictions.resize(feats.size());
  r.winners.assign(feats.size(), Label::NoInteraction);
  for (int f = 0; f < k; ++f) {
    std::vector<LabeledClip> train_set;
    for (std::size_t i = 0; i < feats.size(); ++i) {
      if (folds[i] != f && feats[i] && labels[i] != Label::NoInteraction) {
        train_set.push_back({*feats[i], labels[i], "", ""});
      }
    }
    std::optional<SvmModel> model;
    try {
      model = train(train_set, params, columns);
    } catch (const Error& e) {
      if (e.code() != "DegenerateData") throw;
      r.defined = false;
    }
    for (std::size_t i = 0; i < feats.size(); ++i) {
      if (folds[i] != f || !feats[i] || !model) continue;
      const Prediction& p = r.predictions[i] = model->predict(project(*feats[i], columns));
      const auto top = std::max_element(p.votes.begin(), p.votes.end()) - p.votes.begin();
      r.winners[i] = model->classes[static_cast<std::size_t>(top)];
    }
  }
  for (const auto& p : r.predictions) r.predicted.push_back(p.label);
  return r;
}

std::vector<std::optional<FeatureVector>> all_features(const std::vector<PreparedClip>& clips, const GateConfig& gate,
                                                       const FeatureConfig& fc, int workers) {
  std::vector<std::optional<FeatureVector>> out(clips.size());
  parallel_for(clips.size(), workers, [&](std::size_t i) { out[i] = clip_features(clips[i], gate, fc); });
  return out;
}

MethodScores score(std::vector<Label> predicted, const std::vector<Label>& truth) {
  MethodScores s;
  s.cls = cls_evaluate(predicted, truth);
  s.occurrence = occurrence_evaluate(predicted, truth);
  s.valence = valence_evaluate(predicted, truth);
  s.predicted = std::move(predicted);
  return s;
}

// Interaction clips only, with their corpus folds.
struct Labeled {
  std::vector<PreparedClip> clips;
  std::vector<int> folds;
};

Labeled interaction_subset(const std::vector<PreparedClip>& clips, const Config& cfg) {
  const auto folds = corpus_folds(clips, cfg.eval.folds, cfg.seed);
  Labeled l;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    if (clips[i].entry.label == Label::NoInteraction) continue;
    l.clips.push_back(clips[i]);
    l.folds.push_back(folds[i]);
  }
  return l;
}

std::vector<Label> truth_of(const std::vector<PreparedClip>& clips) {
  std::vector<Label> t;
  for (const auto& c : clips) t.push_back(c.entry.label);
  return t;
}

}  // namespace

BaselineComparison compare_baseline(const std::vector<PreparedClip>& clips, const Config& cfg) {
  const auto folds = corpus_folds(clips, cfg.eval.folds, cfg.seed);
  const auto feats = all_features(clips, cfg.gate, cfg.features, cfg.workers);
  BaselineComparison c;
  c.truth = truth_of(clips);
  const Oof svm = out_of_fold(feats, c.truth, folds, cfg.eval.folds, cfg.svm, feature_columns(FeatureSet::Full));

  std::vector<Label> majority(clips.size(), Label::NoInteraction), occurrence(clips.size(), Label::NoInteraction);
  for (int f = 0; f < cfg.eval.folds; ++f) {
    std::vector<Label> train_labels;
    for (std::size_t i = 0; i < clips.size(); ++i) {
      if (folds[i] != f && feats[i] && c.truth[i] != Label::NoInteraction) train_labels.push_back(c.truth[i]);
    }
    const Label maj = train_labels.empty() ? Label::NoInteraction : majority_label(train_labels);
    for (std::size_t i = 0; i < clips.size(); ++i) {
      if (folds[i] != f) continue;
      const bool gated = feats[i].has_value();
      majority[i] = baseline_predict(gated, BaselineVariant::Majority, maj).label;
      occurrence[i] = baseline_predict(gated, BaselineVariant::Occurrence, maj).label;
    }
  }
  for (const auto& f : feats) c.gated += f.has_value();
  c.svm_winners = svm.winners;
  for (const auto& p : svm.predictions) c.svm_confidence.push_back(p.confidence);
  c.svm = score(svm.predicted, c.truth);
  c.majority = score(std::move(majority), c.truth);
  c.occurrence = score(std::move(occurrence), c.truth);
  return c;
}

std::string comparison_csv(const BaselineComparison& c) {
  std::vector<std::vector<std::string>> rows;
  auto row = [&](const std::string& name, double m, double b, int digits = 4) {
    rows.push_back({name, fixed(m, digits), fixed(b, digits), fixed(m - b, digits)});
  };
  row("Overall Accuracy (%)", 100.0 * c.svm.cls.accuracy, 100.0 * c.majority.cls.accuracy, 2);
  row("Affiliative Precision", c.svm.valence.affiliative_precision, c.majority.valence.affiliative_precision);
  row("Agonistic Precision", c.svm.valence.agonistic_precision, c.majority.valence.agonistic_precision);
  row("Affiliative Recall", c.svm.valence.affiliative_recall, c.majority.valence.affiliative_recall);
  row("Agonistic Recall", c.svm.valence.agonistic_recall, c.majority.valence.agonistic_recall);
  row("F1-Score (Macro)", c.svm.cls.macro_f1, c.majority.cls.macro_f1);
  row("Occurrence False Positive Rate", c.svm.occurrence.false_positive_rate,
      c.occurrence.occurrence.false_positive_rate);
  return io::to_csv({"Metric", "Keypoint-Trajectory Method", "Proximity-Only Baseline", "Improvement"}, rows);
}

std::vector<RejectRow> reject_sweep(const BaselineComparison& c, const std::vector<double>& thresholds) {
  std::vector<RejectRow> out;
  for (double t : thresholds) {
    std::vector<Label> predicted(c.truth.size(), Label::NoInteraction);
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      if (c.svm_winners[i] != Label::NoInteraction && c.svm_confidence[i] >= t) predicted[i] = c.svm_winners[i];
    }
    const MethodScores s = score(std::move(predicted), c.truth);
    out.push_back({t, s.cls.macro_f1, s.cls.accuracy, s.occurrence.false_positive_rate});
  }
  return out;
}

std::string reject_csv(const std::vector<RejectRow>& rows) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows) {
    out.push_back({fixed(r.threshold, 2), fixed(r.macro_f1), fixed(r.accuracy), fixed(r.false_positive_rate)});
  }
  return io::to_csv({"reject_threshold", "macro_f1", "accuracy", "occurrence_fpr"}, out);
}

CvResult classification_report(const std::vector<PreparedClip>& clips, const Config& cfg) {
  const Labeled l = interaction_subset(clips, cfg);
  const auto feats = all_features(l.clips, cfg.gate, cfg.features, cfg.workers);
  CvResult r;
  r.folds = l.folds;
  r.truth = truth_of(l.clips);
  const Oof oof = out_of_fold(feats, r.truth, l.folds, cfg.eval.folds, cfg.svm, feature_columns(FeatureSet::Full));
  r.predictions = oof.predictions;
  r.predicted = oof.predicted;
  r.report = cls_evaluate(r.predicted, r.truth);
  return r;
}

std::string classification_csv(const ClsReport& r) {
  std::vector<std::vector<std::string>> rows;
  double p = 0.0, rc = 0.0, f = 0.0;
  std::size_t n = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const ClassMetrics& m = r.per_class[c];
    rows.push_back({std::string(label_name(m.label)), fixed(m.precision), fixed(m.recall), fixed(m.f1),
                    std::to_string(m.support)});
    if (m.support > 0) {
      p += m.precision;
      rc += m.recall;
      f += m.f1;
      ++n;
    }
  }
  const double d = n > 0 ? static_cast<double>(n) : 1.0;
  rows.push_back({"Macro-Average", fixed(p / d), fixed(rc / d), fixed(r.macro_f1), std::to_string(r.total)});
  rows.push_back({"Accuracy", "", "", fixed(r.accuracy), std::to_string(r.total)});
  return io::to_csv({"Class", "Precision", "Recall", "F1-Score", "Support"}, rows);
}

std::vector<AblationRow> ablate(const std::vector<PreparedClip>& clips, const Config& cfg) {
  const Labeled l = interaction_subset(clips, cfg);
  const auto feats = all_features(l.clips, cfg.gate, cfg.features, cfg.workers);
  const auto truth = truth_of(l.clips);
  const std::array<FeatureSet, 4> sets = {FeatureSet::Full, FeatureSet::MinusRateOfChange, FeatureSet::MinusTransitions,
                                          FeatureSet::MeanDistanceOnly};
  std::vector<AblationRow> rows(sets.size());
  SvmParams params = cfg.svm;
  params.workers = 1;
  parallel_for(sets.size(), cfg.workers, [&](std::size_t i) {
    const Oof oof = out_of_fold(feats, truth, l.folds, cfg.eval.folds, params, feature_columns(sets[i]));
    const ClsReport rep = cls_evaluate(oof.predicted, truth);
    rows[i] = {sets[i], rep.accuracy, rep.macro_f1};
  });
  return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::vector<std::vector<std::string>> body;
  for (const auto& r : rows) {
    body.push_back({std::string(feature_set_name(r.set)), fixed(100.0 * r.accuracy, 2), fixed(r.macro_f1)});
  }
  return io::to_csv({"Feature Set", "Accuracy (%)", "Macro-F1"}, body);
}

std::vector<SensitivityCell> sensitivity(const std::vector<PreparedClip>& clips, const Config& cfg) {
  const auto folds = corpus_folds(clips, cfg.eval.folds, cfg.seed);
  const auto truth_all = truth_of(clips);
  std::vector<std::pair<double, double>> grid;
  for (double a : cfg.eval.alphas) {
    for (double t : cfg.eval.dwells_s) grid.emplace_back(a, t);
  }
  std::vector<SensitivityCell> cells(grid.size());
  SvmParams params = cfg.svm;
  params.workers = 1;
  parallel_for(grid.size(), cfg.workers, [&](std::size_t g) {
    GateConfig gate = cfg.gate;
    gate.alpha = grid[g].first;
    gate.dwell_s = grid[g].second;
    const auto feats = all_features(clips, gate, cfg.features, 1);
    SensitivityCell& cell = cells[g];
    cell.alpha = gate.alpha;
    cell.dwell_s = gate.dwell_s;
    std::vector<std::optional<FeatureVector>> lf;
    std::vector<Label> lt;
    std::vector<int> lfold;
    for (std::size_t i = 0; i < clips.size(); ++i) {
      cell.candidates += feats[i].has_value();
      if (truth_all[i] == Label::NoInteraction) continue;
      ++cell.labeled;
      cell.surviving_labeled += feats[i].has_value();
      lf.push_back(feats[i]);
      lt.push_back(truth_all[i]);
      lfold.push_back(folds[i]);
    }
    const Oof oof = out_of_fold(lf, lt, lfold, cfg.eval.folds, params, feature_columns(FeatureSet::Full));
    const ClsReport rep = cls_evaluate(oof.predicted, lt);
    cell.defined = oof.defined && cell.surviving_labeled > 0;
    cell.macro_f1 = cell.defined ? rep.macro_f1 : 0.0;
    cell.accuracy = cell.defined ? rep.accuracy : 0.0;
  });
  return cells;
}

std::string sensitivity_csv(const std::vector<SensitivityCell>& cells) {
  std::vector<std::vector<std::string>> body;
  for (const auto& c : cells) {
    body.push_back({fixed(c.alpha, 2), fixed(c.dwell_s, 1), fixed(c.macro_f1), fixed(100.0 * c.accuracy, 2),
                    std::to_string(c.candidates), std::to_string(c.surviving_labeled), std::to_string(c.labeled),
                    c.defined ? "defined" : "undefined"});
  }
  return io::to_csv({"Proximity Threshold (alpha)", "Dwell Time (T, s)", "Macro-F1", "Accuracy (%)", "Candidates",
                     "Surviving Labeled", "Labeled", "Status"},
                    body);
}

}  // namespace herdgraph
