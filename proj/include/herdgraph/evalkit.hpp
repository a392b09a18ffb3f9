#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "herdgraph/config.hpp"
#include "herdgraph/core.hpp"
#include "herdgraph/crossval.hpp"
#include "herdgraph/metrics.hpp"
#include "herdgraph/posestream.hpp"
#include "herdgraph/synthlab.hpp"
#include "herdgraph/tracker.hpp"

namespace herdgraph {

// ---------------------------------------------------------------------------
// Tracking metrics on sparse annotated frames

struct GroundTruthFrame {
  std::int64_t frame_index = 0;
  std::vector<std::pair<std::string, BBox>> boxes;  // identities unique per frame
};

struct TrackBox {
  TrackId id = 0;
  BBox box;
};

struct TrackedFrame {
  std::int64_t frame_index = 0;
  std::vector<TrackBox> boxes;
};

struct MotReport {
  double tracking_accuracy = 0.0;  // matched boxes / GT boxes
  double mota = 0.0;
  double idf1 = 0.0;
  std::size_t id_switches = 0;
  std::size_t total_tracks = 0;    // distinct track ids in the output
  std::size_t tracked_frames = 0;  // output frames holding at least one box
  std::size_t fragments = 0;
  std::size_t gt_boxes = 0;
  std::size_t matches = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
};

/// CLEAR MOT over annotated frames: a GT object keeps its previous track when
/// that track is present at IoU >= gate, the rest are matched by Hungarian on
/// 1 - IoU. IDF1 uses a global one-to-one identity matching that maximizes
/// co-occurring matches. Fragments count resumptions of a GT object's
/// coverage after at least one unmatched annotated frame.
/// Throws Error(Data, "NoOverlap") when no annotated frame is in the output range.
MotReport mot_evaluate(const std::vector<GroundTruthFrame>& gt, const std::vector<TrackedFrame>& tracked,
                       double iou_gate = 0.5);

/// Per-frame boxes of every track whose history holds at least `min_samples`
/// samples (drops short-lived unconfirmed tracks).
std::vector<TrackedFrame> tracked_frames(const std::vector<Track>& tracks, std::size_t min_samples = 2);

/// Ground-truth boxes from detection identities, every `every`-th frame.
std::vector<GroundTruthFrame> ground_truth_from_identities(const std::vector<FrameRecord>& frames,
                                                           std::int64_t every = 1);

struct SweepRow {
  double threshold = 0.0;
  MotReport report;
};

std::vector<SweepRow> match_threshold_sweep(const std::vector<GroundTruthFrame>& gt,
                                            const std::vector<FrameRecord>& detections, const StreamMeta& meta,
                                            const TrackerConfig& base, const std::vector<double>& thresholds,
                                            double iou_gate = 0.5, int workers = 1);

// ---------------------------------------------------------------------------
// Corpus evaluation

/// A corpus clip after tracking and stabilization.
struct PreparedClip {
  synth::CorpusEntry entry;
  StreamMeta meta;
  std::vector<PoseTrack> poses;
};

/// Generates, tracks and stabilizes every entry. Deterministic in the entries.
std::vector<PreparedClip> prepare_corpus(const std::vector<synth::CorpusEntry>& entries, const Config& cfg);

/// The two tracks of the clip's dyad: tracks carrying the entry's identities
/// when present, otherwise the two longest tracks.
std::optional<std::pair<const PoseTrack*, const PoseTrack*>> dyad_tracks(const PreparedClip& clip);

/// Features of the clip's longest surviving dwell segment, or nullopt when the
/// gate never holds long enough or the segment has too little data.
std::optional<FeatureVector> clip_features(const PreparedClip& clip, const GateConfig& gate,
                                           const FeatureConfig& features);

/// Fold per clip over all clips, grouped by dyad.
std::vector<int> corpus_folds(const std::vector<PreparedClip>& clips, int k, std::uint64_t seed);

struct MethodScores {
  ClsReport cls;
  OccurrenceReport occurrence;
  ValenceReport valence;
  std::vector<Label> predicted;
};

struct BaselineComparison {
  std::vector<Label> truth;
  MethodScores svm;
  MethodScores majority;    // majority-class baseline
  MethodScores occurrence;  // InteractionPresent for every gated clip
  std::size_t gated = 0;
  std::vector<Label> svm_winners;      // top-voted class per clip, NoInteraction if ungated
  std::vector<double> svm_confidence;  // 0 if ungated
};

/// Clip-level out-of-fold comparison over every clip, distractors included.
/// Ungated clips are predicted NoInteraction by both methods.
BaselineComparison compare_baseline(const std::vector<PreparedClip>& clips, const Config& cfg);

/// Columns: metric, keypoint method, proximity baseline, improvement.
std::string comparison_csv(const BaselineComparison& c);

struct RejectRow {
  double threshold = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  double false_positive_rate = 0.0;
};

/// Re-scores the comparison's out-of-fold SVM output at other reject thresholds.
std::vector<RejectRow> reject_sweep(const BaselineComparison& c, const std::vector<double>& thresholds);
std::string reject_csv(const std::vector<RejectRow>& rows);

/// Out-of-fold classifier report on gated interaction clips.
CvResult classification_report(const std::vector<PreparedClip>& clips, const Config& cfg);
std::string classification_csv(const ClsReport& r);

struct AblationRow {
  FeatureSet set = FeatureSet::Full;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
};

/// One row per feature subset, trained and scored on identical folds over the
/// gated interaction clips.
std::vector<AblationRow> ablate(const std::vector<PreparedClip>& clips, const Config& cfg);
std::string ablation_csv(const std::vector<AblationRow>& rows);

struct SensitivityCell {
  double alpha = 0.0;
  double dwell_s = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::size_t candidates = 0;          // clips (any label) passing the gate
  std::size_t surviving_labeled = 0;   // interaction clips passing the gate
  std::size_t labeled = 0;             // interaction clips in the corpus
  bool defined = true;                 // false when some fold could not train
};

/// Re-gates, re-extracts and cross-validates per (alpha, dwell) cell. Clips
/// that do not survive count as NoInteraction predictions.
std::vector<SensitivityCell> sensitivity(const std::vector<PreparedClip>& clips, const Config& cfg);
std::string sensitivity_csv(const std::vector<SensitivityCell>& cells);

std::string mot_csv(const MotReport& r);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace herdgraph
