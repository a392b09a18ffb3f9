#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "herdgraph/dyad.hpp"
#include "herdgraph/features.hpp"
#include "herdgraph/posestream.hpp"
#include "herdgraph/socialnet.hpp"
#include "herdgraph/svm.hpp"
#include "herdgraph/synthlab.hpp"
#include "herdgraph/tracker.hpp"

namespace herdgraph {

struct EvalConfig {
  double mot_iou_gate = 0.5;
  int folds = 5;
  std::vector<double> alphas = {0.30, 0.35, 0.40};
  std::vector<double> dwells_s = {3.0, 4.0, 5.0};
  std::vector<double> match_thresholds = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
};

struct NetworkConfig {
  WeightMode weight_mode = WeightMode::Count;
  double merge_gap_s = 1.0;
  /// Extra nodes to include even without edges.
  std::vector<std::string> roster;
};

struct Config {
  std::uint64_t seed = 0;
  int workers = 1;
  std::string simd = "auto";  // auto, scalar or avx2
  TrackerConfig tracker;
  SmootherConfig smoother;
  GateConfig gate;
  FeatureConfig features;
  SvmParams svm;
  synth::CorpusSpec synth;
  EvalConfig eval;
  NetworkConfig network;

  /// Throws Error(Config) naming the offending key.
  void validate() const;
};

nlohmann::ordered_json config_to_json(const Config& c);

/// Every key must be present and no unknown key is accepted. Errors are
/// Error(Config) with codes MissingKey, UnknownKey or InvalidValue and the
/// dotted key path in the message.
Config config_from_json(const nlohmann::ordered_json& j);

Config load_config(const std::filesystem::path& path);

}  // namespace herdgraph
