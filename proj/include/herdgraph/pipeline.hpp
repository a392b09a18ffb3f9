#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "herdgraph/config.hpp"
#include "herdgraph/evalkit.hpp"
#include "herdgraph/io.hpp"
#include "herdgraph/socialnet.hpp"
#include "herdgraph/svm.hpp"

namespace herdgraph {

struct StageTimes {
  double track_s = 0.0;
  double stabilize_s = 0.0;
  double gate_s = 0.0;
  double features_s = 0.0;
  double classify_s = 0.0;
  double network_s = 0.0;

  StageTimes& operator+=(const StageTimes& o);
};

/// Feature rows for gated windows; windows lacking data are skipped and counted.
std::vector<io::FeatureRow> feature_rows(const StreamMeta& meta, const std::vector<DyadWindow>& windows,
                                         const FeatureConfig& cfg, std::size_t* skipped = nullptr);

/// Events for rows whose prediction is an interaction class. Rows without a
/// known identity use "track:<id>".
std::vector<InteractionEvent> events_from(const std::vector<io::FeatureRow>& rows,
                                          const std::vector<Prediction>& predictions);

struct StreamOutput {
  StreamMeta meta;
  std::vector<Track> tracks;
  std::vector<PoseTrack> poses;
  std::vector<io::WindowRecord> windows;
  std::vector<io::FeatureRow> rows;
  std::vector<Prediction> predictions;
  std::vector<InteractionEvent> events;  // merged within the stream
  std::size_t skipped_windows = 0;
  StageTimes times;
};

/// track -> stabilize -> gate -> features -> classify for one stream.
StreamOutput process_stream(const StreamMeta& meta, const std::vector<FrameRecord>& frames, const Config& cfg,
                            const SvmModel& model);

struct NetworkOutput {
  std::vector<InteractionEvent> events;
  std::array<SocialGraph, 3> graphs;  // affiliative, agonistic, combined
  std::array<GraphMetrics, 3> metrics;
};

inline constexpr std::array<Layer, 3> kLayers = {Layer::Affiliative, Layer::Agonistic, Layer::Combined};

/// Events must already be merged per stream.
NetworkOutput build_network(std::vector<InteractionEvent> events, const NetworkConfig& cfg);

struct StreamInput {
  StreamMeta meta;
  std::vector<FrameRecord> frames;
};

struct PipelineResult {
  std::vector<StreamOutput> streams;
  NetworkOutput network;
  StageTimes times;
};

/// Streams run in parallel; results are ordered as the inputs.
PipelineResult run_pipeline(const std::vector<StreamInput>& inputs, const Config& cfg, const SvmModel& model);

/// Writes graph_<layer>.graphml/.dot and metrics_<layer>.json per layer;
/// returns a per-layer summary.
io::Json write_network(const std::filesystem::path& out_dir, const NetworkOutput& network);

/// Writes tracks, windows, features, events, graphs, metrics, a deterministic
/// run report and a separate timing file into `out_dir`.
void write_pipeline_outputs(const std::filesystem::path& out_dir, const PipelineResult& result, const Config& cfg);

/// Window-level training rows from prepared corpus clips: every gated window
/// of each interaction clip's dyad, labeled with the clip's class.
std::vector<io::FeatureRow> training_rows(const std::vector<PreparedClip>& clips, const Config& cfg);

std::vector<LabeledClip> labeled_clips(const std::vector<io::FeatureRow>& rows);

/// Ground-truth events of interaction clips, one per clip spanning the clip.
std::vector<InteractionEvent> ground_truth_events(const std::vector<synth::CorpusEntry>& entries);

/// Writes the corpus clips as frame files plus a manifest with labels,
/// identities and analytic curve parameters.
io::Manifest write_corpus(const std::filesystem::path& dir, const std::vector<synth::CorpusEntry>& entries,
                          int workers);

/// Reads the frame streams listed in a manifest.
std::vector<StreamInput> read_streams(const std::filesystem::path& manifest_path);

/// Restores corpus entries (labels, identities, specs) from a manifest.
std::vector<synth::CorpusEntry> corpus_entries(const std::filesystem::path& manifest_path);

}  // namespace herdgraph
