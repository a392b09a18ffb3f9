#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "herdgraph/core.hpp"
#include "herdgraph/dyad.hpp"
#include "herdgraph/features.hpp"
#include "herdgraph/posestream.hpp"
#include "herdgraph/socialnet.hpp"
#include "herdgraph/svm.hpp"
#include "herdgraph/tracker.hpp"

namespace herdgraph::io {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

inline constexpr std::string_view kFormatVersion = "herdgraph/1";

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
/// Throws Error(Parse) naming `what` on malformed text.
double parse_double(std::string_view s, std::string_view what);

/// Writes to a sibling temporary file, then renames over `path`. Parent
/// directories are created.
void write_atomic(const fs::path& path, std::string_view content);
std::string read_text(const fs::path& path);

// ---------------------------------------------------------------- frames

Json meta_to_json(const StreamMeta& meta);
StreamMeta meta_from_json(const Json& j);

std::string frames_to_jsonl(const StreamMeta& meta, const std::vector<FrameRecord>& frames);
void write_frames(const fs::path& path, const StreamMeta& meta, const std::vector<FrameRecord>& frames);

/// Streaming reader. The header is parsed on construction; records are parsed
/// and validated one per next() call. Errors carry the 1-based line number.
class FrameReader {
 public:
  explicit FrameReader(const fs::path& path);
  const StreamMeta& meta() const { return meta_; }
  std::optional<FrameRecord> next();
  std::size_t line() const { return line_; }

 private:
  std::ifstream in_;
  std::string name_;
  StreamMeta meta_;
  std::size_t line_ = 0;
  std::optional<std::int64_t> last_frame_;
};

std::pair<StreamMeta, std::vector<FrameRecord>> read_frames(const fs::path& path);

// ---------------------------------------------------------------- tracks

std::string tracks_to_jsonl(const StreamMeta& meta, const std::vector<Track>& tracks);
void write_tracks(const fs::path& path, const StreamMeta& meta, const std::vector<Track>& tracks);
/// Restores id, status, hits, last detection frame, votes and history. The
/// Kalman state is not persisted.
std::pair<StreamMeta, std::vector<Track>> read_tracks(const fs::path& path);

// ---------------------------------------------------------------- poses

void write_poses(const fs::path& path, const StreamMeta& meta, const std::vector<PoseTrack>& poses);
std::pair<StreamMeta, std::vector<PoseTrack>> read_poses(const fs::path& path);

// ---------------------------------------------------------------- windows

struct WindowRecord {
  TrackId track_a = 0;
  TrackId track_b = 0;
  std::optional<std::string> identity_a;
  std::optional<std::string> identity_b;
  FrameInterval span;
  double coverage = 0.0;
};

WindowRecord window_record(const DyadWindow& w);
void write_windows(const fs::path& path, const StreamMeta& meta, const std::vector<WindowRecord>& windows);
std::pair<StreamMeta, std::vector<WindowRecord>> read_windows(const fs::path& path);

// ---------------------------------------------------------------- features

struct FeatureRow {
  std::string source_id;
  TrackId track_a = 0;
  TrackId track_b = 0;
  std::string identity_a;  // empty when unknown
  std::string identity_b;
  FrameInterval span;
  std::optional<Label> label;
  FeatureVector features{};

  friend bool operator==(const FeatureRow&, const FeatureRow&) = default;
};

std::vector<std::string> feature_csv_header();
std::string features_to_csv(const std::vector<FeatureRow>& rows);
void write_features(const fs::path& path, const std::vector<FeatureRow>& rows);
/// Rejects a header that differs from feature_csv_header().
std::vector<FeatureRow> read_features(const fs::path& path);

// ---------------------------------------------------------------- model

Json model_to_json(const SvmModel& m);
SvmModel model_from_json(const Json& j);
void save_model(const fs::path& path, const SvmModel& m);
SvmModel load_model(const fs::path& path);

// ---------------------------------------------------------------- events

void write_events(const fs::path& path, const std::vector<InteractionEvent>& events);
std::vector<InteractionEvent> read_events(const fs::path& path);

// ---------------------------------------------------------------- graphs

std::string graph_to_graphml(const SocialGraph& g);
std::string graph_to_dot(const SocialGraph& g);
/// Reads GraphML written by graph_to_graphml.
SocialGraph graph_from_graphml(const std::string& text);
Json metrics_to_json(const SocialGraph& g, const GraphMetrics& m);

// ---------------------------------------------------------------- tables

std::string csv_escape(std::string_view field);
std::vector<std::string> csv_split(std::string_view line);
std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);
void write_json(const fs::path& path, const Json& j);
Json read_json(const fs::path& path);

// ---------------------------------------------------------------- manifest

struct ManifestFile {
  std::string path;  // relative to the manifest's directory
  std::string role;  // frames, tracks, poses, windows, features, labels, model, graph, report, events
  Json attributes = Json::object();
};

struct Manifest {
  std::string format_version = std::string(kFormatVersion);
  std::optional<StreamMeta> stream;
  std::vector<ManifestFile> files;

  std::vector<const ManifestFile*> with_role(std::string_view role) const;
};

void write_manifest(const fs::path& path, const Manifest& m);
/// Rejects unknown versions and missing referenced files.
Manifest read_manifest(const fs::path& path);

}  // namespace herdgraph::io
