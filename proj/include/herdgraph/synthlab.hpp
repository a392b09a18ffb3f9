#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "herdgraph/core.hpp"

namespace herdgraph::synth {

enum class Template { Grooming, Headbutt, Displacement, PassiveProximity, NoContact };

const char* template_name(Template t);
/// Throws Error(Config, "UnknownTemplate").
Template parse_template(const std::string& s);
/// Ground-truth class: the three interaction templates map to their class,
/// passive proximity and no contact map to NoInteraction.
Label template_label(Template t);

struct ScenarioSpec {
  Template tmpl = Template::Grooming;
  double duration_s = 8.0;
  double fps = 30.0;
  double noise_sigma = 0.0;     // keypoint noise std in normalized distance units
  double occlusion_rate = 0.0;  // probability a keypoint sample is dropped
  std::uint64_t seed = 0;
  std::string identity_a = "A";
  std::string identity_b = "B";
  std::string source_id = "clip";

  /// Throws Error(Config) on invalid values.
  void validate() const;
};

/// Analytic minimum keypoint distance d*(t), normalized by the box diagonal.
/// Each template is a smooth closed form so derivatives are exact.
struct DistanceCurve {
  Template tmpl = Template::Grooming;
  double offset = 0.0;     // c
  double amplitude = 0.0;  // a
  double omega = 0.0;      // rad/s
  double phase = 0.0;
  double duration = 1.0;

  double value(double t) const;
  double first(double t) const;
  double second(double t) const;
};

/// Per-clip body layout, in pixels. Exposed so tests can verify geometry.
struct Layout {
  double gap0 = 0.0;      // vertical box gap at t = 0
  double gap_amp = 0.0;   // template-specific gap modulation
  double target_lift = 0.0;  // fixed part of the partner's raised target point
  double target_amp = 0.0;   // modulated part (headbutt)
};

struct SyntheticClip {
  ScenarioSpec spec;
  StreamMeta meta;
  Label label = Label::NoInteraction;
  DistanceCurve curve;
  Layout layout;
  std::vector<FrameRecord> frames;
  /// d*(t_k) for every frame.
  std::vector<double> distance;
};

/// Body box size and diagonal used by every template.
inline constexpr double kBodyWidth = 240.0;
inline constexpr double kBodyHeight = 100.0;
double body_diagonal();

/// Deterministic in the spec.
SyntheticClip generate(const ScenarioSpec& spec);

struct CorpusSpec {
  int n_per_class = 50;
  std::vector<std::string> roster = {"C01", "C02", "C03", "C04", "C05", "C06"};
  double noise_sigma = 0.01;
  double occlusion_rate = 0.02;
  double distractor_fraction = 0.25;  // share of the whole corpus
  double fps = 30.0;
  double min_duration_s = 6.0;
  double max_duration_s = 15.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CorpusEntry {
  std::string clip_id;
  ScenarioSpec spec;
  Label label = Label::NoInteraction;
  bool distractor = false;
};

/// Interaction clips first, class-interleaved, then distractors. Dyads are
/// assigned round-robin over the roster's unordered pairs.
/// Throws Error(Data, "RosterTooSmall") with fewer than two identities.
std::vector<CorpusEntry> corpus(const CorpusSpec& spec);

/// Per-clip seed derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace herdgraph::synth
