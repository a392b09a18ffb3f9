#include "herdgraph/synthlab.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "herdgraph/error.hpp"

namespace herdgraph::synth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Rest skeleton in box-local pixels, animal facing +x. Every point lies in
// y in [34, 66] except mid_back (unique top, y = 32) and belly (unique bottom,
// y = 70), so the closest pair between two stacked animals is known exactly.
constexpr std::array<Point2, kNumKeypoints> kRest = {{
    {236, 50},  // nose
    {226, 44},  // left_eye
    {226, 56},  // right_eye
    {216, 40},  // left_ear
    {216, 60},  // right_ear
    {214, 50},  // poll
    {206, 56},  // throat
    {170, 48},  // withers
    {120, 32},  // mid_back
    {80, 50},   // loin
    {30, 50},   // tail_head
    {16, 52},   // tail_mid
    {4, 54},    // tail_tip
    {178, 38},  // left_front_shoulder
    {186, 36},  // left_front_knee
    {192, 34},  // left_front_hoof
    {178, 62},  // right_front_shoulder
    {186, 64},  // right_front_knee
    {192, 66},  // right_front_hoof
    {60, 38},   // left_hind_hip
    {52, 36},   // left_hind_hock
    {46, 34},   // left_hind_hoof
    {60, 62},   // right_hind_hip
    {52, 64},   // right_hind_hock
    {46, 66},   // right_hind_hoof
    {200, 58},  // brisket
    {120, 70},  // belly
}};

constexpr double kRestTop = 32.0;     // B's mid_back
constexpr double kRestBottom = 70.0;  // A's belly

// Head points relative to a lowered nose; all strictly above it.
constexpr std::array<std::pair<std::size_t, Point2>, 6> kHeadOffsets = {{
    {kp::LeftEye, {-10, -10}},
    {kp::RightEye, {-10, -16}},
    {kp::LeftEar, {-20, -8}},
    {kp::RightEar, {-20, -20}},
    {kp::Poll, {-18, -14}},
    {kp::Throat, {-26, -6}},
}};

constexpr double kOriginX = 1600.0;
constexpr double kOriginY = 1100.0;

bool raised_cosine(Template t) { return t == Template::Headbutt || t == Template::Displacement; }

double osc(const DistanceCurve& c, double t) { return 0.5 * (1.0 - std::cos(c.omega * t + c.phase)); }

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
  double normal(double sigma) {
    return sigma > 0.0 ? std::normal_distribution<double>(0.0, sigma)(engine) : 0.0;
  }
  bool bernoulli(double p) { return p > 0.0 && std::bernoulli_distribution(p)(engine); }
};

}  // namespace

const char* template_name(Template t) {
  switch (t) {
    case Template::Grooming: return "grooming";
    case Template::Headbutt: return "headbutt";
    case Template::Displacement: return "displacement";
    case Template::PassiveProximity: return "passive_proximity";
    case Template::NoContact: return "no_contact";
  }
  return "grooming";
}

Template parse_template(const std::string& s) {
  for (Template t : {Template::Grooming, Template::Headbutt, Template::Displacement,
                     Template::PassiveProximity, Template::NoContact}) {
    if (s == template_name(t)) return t;
  }
  throw Error(ErrorKind::Config, "UnknownTemplate", "unknown scenario template '" + s + "'");
}

Label template_label(Template t) {
  switch (t) {
    case Template::Grooming: return Label::LickGroom;
    case Template::Headbutt: return Label::Headbutt;
    case Template::Displacement: return Label::Displacement;
    default: return Label::NoInteraction;
  }
}

void ScenarioSpec::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::Config, "InvalidScenario", m); };
  if (!(fps > 0.0) || !std::isfinite(fps)) fail("fps must be positive");
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) fail("duration_s must be positive");
  if (std::llround(duration_s * fps) < 3) fail("clip must span at least 3 frames");
  if (!(noise_sigma >= 0.0)) fail("noise_sigma must be non-negative");
  if (!(occlusion_rate >= 0.0 && occlusion_rate <= 1.0)) fail("occlusion_rate must lie in [0, 1]");
  if (identity_a.empty() || identity_b.empty() || identity_a == identity_b) {
    fail("identities must be distinct and non-empty");
  }
}

double DistanceCurve::value(double t) const {
  if (raised_cosine(tmpl)) return offset + amplitude * osc(*this, t);
  return offset + amplitude * std::sin(omega * t + phase);
}

double DistanceCurve::first(double t) const {
  if (raised_cosine(tmpl)) return 0.5 * amplitude * omega * std::sin(omega * t + phase);
  return amplitude * omega * std::cos(omega * t + phase);
}

double DistanceCurve::second(double t) const {
  if (raised_cosine(tmpl)) return 0.5 * amplitude * omega * omega * std::cos(omega * t + phase);
  return -amplitude * omega * omega * std::sin(omega * t + phase);
}

double body_diagonal() { return std::hypot(kBodyWidth, kBodyHeight); }

SyntheticClip generate(const ScenarioSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const double diag = body_diagonal();
  SyntheticClip clip;
  clip.spec = spec;
  clip.meta.fps = spec.fps;
  clip.meta.source_id = spec.source_id;
  clip.label = template_label(spec.tmpl);

  DistanceCurve& c = clip.curve;
  Layout& lay = clip.layout;
  c.tmpl = spec.tmpl;
  c.duration = spec.duration_s;
  switch (spec.tmpl) {
    case Template::Grooming:
      c.offset = rng.uniform(0.04, 0.07);
      c.amplitude = rng.uniform(0.01, 0.02);
      c.omega = kTwoPi * rng.uniform(0.5, 0.9);
      c.phase = rng.uniform(0.0, kTwoPi);
      lay.gap0 = rng.uniform(10.0, 60.0);
      lay.target_lift = 2.0;
      break;
    case Template::Headbutt:
      c.offset = rng.uniform(0.03, 0.05);
      c.amplitude = rng.uniform(0.10, 0.16);
      c.omega = kTwoPi * rng.uniform(0.9, 1.4);
      c.phase = rng.uniform(0.0, kTwoPi);
      lay.gap0 = rng.uniform(10.0, 55.0);
      lay.gap_amp = 8.0;
      lay.target_lift = 2.0;
      lay.target_amp = 6.0;
      break;
    case Template::Displacement:
      c.offset = rng.uniform(0.04, 0.07);
      c.amplitude = rng.uniform(0.10, 0.15);
      c.omega = std::numbers::pi / spec.duration_s;
      c.phase = 0.0;
      lay.gap0 = rng.uniform(10.0, 40.0);
      lay.gap_amp = 20.0;
      lay.target_lift = 2.0;
      break;
    case Template::PassiveProximity:
    case Template::NoContact: {
      lay.gap0 = spec.tmpl == Template::NoContact ? rng.uniform(200.0, 300.0) : rng.uniform(10.0, 45.0);
      lay.gap_amp = 3.0;
      c.offset = (kBodyHeight - kRestBottom + kRestTop + lay.gap0) / diag;
      c.amplitude = lay.gap_amp / diag;
      c.omega = kTwoPi * rng.uniform(0.05, 0.15);
      c.phase = rng.uniform(0.0, kTwoPi);
      break;
    }
  }
  const double drift = rng.uniform(-10.0, 10.0);  // common walk along x, px/s

  const bool interacting = clip.label != Label::NoInteraction;
  double target_x = 120.0, contact_x = 120.0;
  if (interacting) {
    contact_x = kRest[kp::Nose].x;
    target_x = spec.tmpl == Template::Headbutt ? kRest[kp::Nose].x : kRest[kp::Withers].x;
  }

  const double key_sigma = spec.noise_sigma * diag;
  const double box_sigma = 0.25 * key_sigma;
  const auto n = static_cast<std::int64_t>(std::llround(spec.duration_s * spec.fps));
  clip.frames.reserve(static_cast<std::size_t>(n));
  clip.distance.reserve(static_cast<std::size_t>(n));

  for (std::int64_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / spec.fps;
    const double d_px = c.value(t) * diag;
    double gap = lay.gap0;
    double lift = lay.target_lift;
    switch (spec.tmpl) {
      case Template::Headbutt:
        gap += lay.gap_amp * osc(c, t);
        lift += lay.target_amp * osc(c, t);
        break;
      case Template::Displacement: gap += lay.gap_amp * osc(c, t); break;
      case Template::PassiveProximity:
      case Template::NoContact: gap += lay.gap_amp * std::sin(c.omega * t + c.phase); break;
      default: break;
    }
    // B moves with the gap; A stays put apart from the common drift.
    const double bx = kOriginX + drift * t;
    const double by = kOriginY + (gap - lay.gap0);
    const double ax = bx + target_x - contact_x;
    const double ay = kOriginY - kBodyHeight - lay.gap0;

    std::array<Point2, kNumKeypoints> pa = kRest, pb = kRest;
    if (interacting) {
      // Lowered nose of A reaches exactly d_px above the partner's raised target.
      const double reach = kBodyHeight - kRestBottom + kRestTop + gap - lift - d_px;
      pa[kp::Nose] = {contact_x, kRestBottom + reach};
      for (auto [idx, off] : kHeadOffsets) pa[idx] = {contact_x + off.x, pa[kp::Nose].y + off.y};
      if (spec.tmpl == Template::Headbutt) {
        pb[kp::Nose] = {target_x, kRestTop - lift};
        for (auto [idx, off] : kHeadOffsets) pb[idx] = {target_x + off.x, pb[kp::Nose].y - off.y};
      } else {
        pb[kp::Withers] = {target_x, kRestTop - lift};
      }
    }

    FrameRecord rec;
    rec.frame_index = k;
    rec.timestamp_s = timestamp_of(k, spec.fps);
    auto emit = [&](double ox, double oy, const std::array<Point2, kNumKeypoints>& local,
                    const std::string& identity) {
      Detection det;
      det.bbox = {ox + rng.normal(box_sigma), oy + rng.normal(box_sigma),
                  ox + kBodyWidth + rng.normal(box_sigma), oy + kBodyHeight + rng.normal(box_sigma)};
      det.confidence = rng.uniform(0.8, 0.95);
      det.identity = identity;
      Skeleton sk;
      for (std::size_t i = 0; i < kNumKeypoints; ++i) {
        const double nx = rng.normal(key_sigma), ny = rng.normal(key_sigma);
        if (rng.bernoulli(spec.occlusion_rate)) continue;
        sk.points[i] = {ox + local[i].x + nx, oy + local[i].y + ny, Visibility::Visible, 0.9};
      }
      det.skeleton = sk;
      rec.detections.push_back(std::move(det));
    };
    emit(ax, ay, pa, spec.identity_a);
    emit(bx, by, pb, spec.identity_b);
    clip.frames.push_back(std::move(rec));
    clip.distance.push_back(c.value(t));
  }
  return clip;
}

void CorpusSpec::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::Config, "InvalidCorpus", m); };
  if (n_per_class < 1) fail("n_per_class must be at least 1");
  if (!(distractor_fraction >= 0.0 && distractor_fraction < 1.0)) fail("distractor_fraction must lie in [0, 1)");
  if (!(fps > 0.0)) fail("fps must be positive");
  if (!(min_duration_s > 0.0 && max_duration_s >= min_duration_s)) fail("invalid duration range");
  if (!(noise_sigma >= 0.0)) fail("noise_sigma must be non-negative");
  if (!(occlusion_rate >= 0.0 && occlusion_rate <= 1.0)) fail("occlusion_rate must lie in [0, 1]");
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix(splitmix(master) ^ (index + 1) * 0xD1B54A32D192ED03ULL);
}

std::vector<CorpusEntry> corpus(const CorpusSpec& spec) {
  if (spec.roster.size() < 2) {
    throw data_error("RosterTooSmall", "a corpus needs at least two identities");
  }
  spec.validate();
  std::vector<std::pair<std::string, std::string>> dyads;
  for (std::size_t i = 0; i < spec.roster.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.roster.size(); ++j) dyads.emplace_back(spec.roster[i], spec.roster[j]);
  }
  const auto interactions = static_cast<std::size_t>(3 * spec.n_per_class);
  const auto distractors = static_cast<std::size_t>(std::llround(
      static_cast<double>(interactions) * spec.distractor_fraction / (1.0 - spec.distractor_fraction)));
  constexpr std::array<Template, 3> kCycle = {Template::Grooming, Template::Headbutt, Template::Displacement};

  std::vector<CorpusEntry> out;
  for (std::size_t i = 0; i < interactions + distractors; ++i) {
    CorpusEntry e;
    char id[32];
    std::snprintf(id, sizeof id, "clip_%04zu", i);
    e.clip_id = id;
    e.distractor = i >= interactions;
    e.spec.tmpl = e.distractor ? Template::PassiveProximity : kCycle[i % 3];
    e.label = template_label(e.spec.tmpl);
    Rng rng(derive_seed(spec.seed ^ 0xA5A5A5A5ULL, i));
    e.spec.duration_s = rng.uniform(spec.min_duration_s, spec.max_duration_s);
    e.spec.fps = spec.fps;
    e.spec.noise_sigma = spec.noise_sigma;
    e.spec.occlusion_rate = spec.occlusion_rate;
    e.spec.seed = derive_seed(spec.seed, i);
    const auto& [a, b] = dyads[i % dyads.size()];
    const bool swap = (i / dyads.size()) % 2 == 1;
    e.spec.identity_a = swap ? b : a;
    e.spec.identity_b = swap ? a : b;
    e.spec.source_id = e.clip_id;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace herdgraph::synth
