#include "herdgraph/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "herdgraph/error.hpp"

namespace herdgraph {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void invalid(const std::string& key, const std::string& msg) {
  throw Error(ErrorKind::Config, "InvalidValue", "config key '" + key + "': " + msg);
}

// Walks one object, checking presence, type and completeness.
class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) invalid(path_.empty() ? "<root>" : path_, "expected an object");
  }

  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw Error(ErrorKind::Config, "UnknownKey", "unknown config key '" + key(it.key()) + "'");
      }
    }
  }

  const Json& get(const std::string& name) {
    seen_.insert(name);
    auto it = j_.find(name);
    if (it == j_.end()) throw Error(ErrorKind::Config, "MissingKey", "missing config key '" + key(name) + "'");
    return *it;
  }
  double num(const std::string& name) {
    const Json& v = get(name);
    if (!v.is_number()) invalid(key(name), "expected a number");
    return v.get<double>();
  }
  std::int64_t integer(const std::string& name) {
    const Json& v = get(name);
    if (!v.is_number_integer()) invalid(key(name), "expected an integer");
    return v.get<std::int64_t>();
  }
  std::uint64_t uinteger(const std::string& name) {
    const Json& v = get(name);
    if (!v.is_number_unsigned()) invalid(key(name), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }
  bool boolean(const std::string& name) {
    const Json& v = get(name);
    if (!v.is_boolean()) invalid(key(name), "expected true or false");
    return v.get<bool>();
  }
  std::string str(const std::string& name) {
    const Json& v = get(name);
    if (!v.is_string()) invalid(key(name), "expected a string");
    return v.get<std::string>();
  }
  std::vector<double> nums(const std::string& name) {
    const Json& v = get(name);
    if (!v.is_array()) invalid(key(name), "expected an array of numbers");
    std::vector<double> out;
    for (const Json& x : v) {
      if (!x.is_number()) invalid(key(name), "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  std::vector<std::string> strs(const std::string& name) {
    const Json& v = get(name);
    if (!v.is_array()) invalid(key(name), "expected an array of strings");
    std::vector<std::string> out;
    for (const Json& x : v) {
      if (!x.is_string()) invalid(key(name), "expected an array of strings");
      out.push_back(x.get<std::string>());
    }
    return out;
  }
  Section sub(const std::string& name) { return Section(get(name), key(name)); }
  std::string key(const std::string& name) const { return path_.empty() ? name : path_ + "." + name; }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

const char* gamma_mode_name(GammaMode m) {
  switch (m) {
    case GammaMode::Scale: return "scale";
    case GammaMode::Auto: return "auto";
    case GammaMode::Fixed: return "fixed";
  }
  return "scale";
}

// Rewraps a module's own validation failure so the message names the section.
template <class F>
void check(const std::string& section, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Config) throw;
    throw Error(ErrorKind::Config, "InvalidValue", "config section '" + section + "': " + e.what());
  }
}

}  // namespace

void Config::validate() const {
  if (workers < 1) invalid("workers", "must be at least 1");
  if (simd != "auto" && simd != "scalar" && simd != "avx2") invalid("simd", "expected auto, scalar or avx2");
  check("tracker", [&] { tracker.validate(); });
  check("smoother", [&] { smoother.validate(); });
  check("gate", [&] { gate.validate(); });
  check("synth", [&] { synth.validate(); });
  if (!(features.deadband_factor >= 0.0)) invalid("features.deadband_factor", "must be non-negative");
  if (!(svm.C > 0.0)) invalid("svm.C", "must be positive");
  if (svm.gamma_mode == GammaMode::Fixed && !(svm.gamma > 0.0)) invalid("svm.gamma", "must be positive");
  if (!(svm.tol > 0.0)) invalid("svm.tol", "must be positive");
  if (!(svm.reject_threshold >= 0.0 && svm.reject_threshold <= 1.0)) invalid("svm.reject_threshold", "must lie in [0, 1]");
  if (!(eval.mot_iou_gate > 0.0 && eval.mot_iou_gate <= 1.0)) invalid("eval.mot_iou_gate", "must lie in (0, 1]");
  if (eval.folds < 2) invalid("eval.folds", "must be at least 2");
  if (eval.alphas.empty()) invalid("eval.alphas", "must not be empty");
  if (eval.dwells_s.empty()) invalid("eval.dwells_s", "must not be empty");
  for (double a : eval.alphas) {
    if (!(a > 0.0)) invalid("eval.alphas", "entries must be positive");
  }
  for (double d : eval.dwells_s) {
    if (!(d > 0.0)) invalid("eval.dwells_s", "entries must be positive");
  }
  for (double t : eval.match_thresholds) {
    if (!(t >= 0.0 && t <= 1.0)) invalid("eval.match_thresholds", "entries must lie in [0, 1]");
  }
  if (!(network.merge_gap_s >= 0.0)) invalid("network.merge_gap_s", "must be non-negative");
}

Json config_to_json(const Config& c) {
  Json j;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["simd"] = c.simd;
  j["tracker"] = {{"track_threshold", c.tracker.track_threshold},
                  {"match_threshold", c.tracker.match_threshold},
                  {"track_buffer_s", c.tracker.track_buffer_s},
                  {"low_threshold", c.tracker.low_threshold},
                  {"confirm_hits", c.tracker.confirm_hits},
                  {"noise",
                   {{"position_weight", c.tracker.noise.position_weight},
                    {"velocity_weight", c.tracker.noise.velocity_weight},
                    {"measurement_weight", c.tracker.noise.measurement_weight},
                    {"aspect_measurement_std", c.tracker.noise.aspect_measurement_std}}}};
  j["smoother"] = {{"window", c.smoother.window}, {"sigma", c.smoother.sigma}};
  j["gate"] = {{"alpha", c.gate.alpha},
               {"dwell_s", c.gate.dwell_s},
               {"window_s", c.gate.window_s},
               {"stride_s", c.gate.stride_s},
               {"min_coverage", c.gate.min_coverage}};
  j["features"] = {{"normalize", c.features.normalize}, {"deadband_factor", c.features.deadband_factor}};
  j["svm"] = {{"C", c.svm.C},
              {"gamma_mode", gamma_mode_name(c.svm.gamma_mode)},
              {"gamma", c.svm.gamma},
              {"balanced", c.svm.balanced},
              {"tol", c.svm.tol},
              {"reject_threshold", c.svm.reject_threshold}};
  j["synth"] = {{"n_per_class", c.synth.n_per_class},
                {"roster", c.synth.roster},
                {"noise_sigma", c.synth.noise_sigma},
                {"occlusion_rate", c.synth.occlusion_rate},
                {"distractor_fraction", c.synth.distractor_fraction},
                {"fps", c.synth.fps},
                {"min_duration_s", c.synth.min_duration_s},
                {"max_duration_s", c.synth.max_duration_s}};
  j["eval"] = {{"mot_iou_gate", c.eval.mot_iou_gate},
               {"folds", c.eval.folds},
               {"alphas", c.eval.alphas},
               {"dwells_s", c.eval.dwells_s},
               {"match_thresholds", c.eval.match_thresholds}};
  j["network"] = {{"weight_mode", weight_mode_name(c.network.weight_mode)},
                  {"merge_gap_s", c.network.merge_gap_s},
                  {"roster", c.network.roster}};
  return j;
}

Config config_from_json(const Json& j) {
  Config c;
  {
    Section root(j, "");
    c.seed = root.uinteger("seed");
    c.workers = static_cast<int>(root.integer("workers"));
    c.simd = root.str("simd");
    {
      Section s = root.sub("tracker");
      c.tracker.track_threshold = s.num("track_threshold");
      c.tracker.match_threshold = s.num("match_threshold");
      c.tracker.track_buffer_s = s.num("track_buffer_s");
      c.tracker.low_threshold = s.num("low_threshold");
      c.tracker.confirm_hits = static_cast<int>(s.integer("confirm_hits"));
      Section n = s.sub("noise");
      c.tracker.noise.position_weight = n.num("position_weight");
      c.tracker.noise.velocity_weight = n.num("velocity_weight");
      c.tracker.noise.measurement_weight = n.num("measurement_weight");
      c.tracker.noise.aspect_measurement_std = n.num("aspect_measurement_std");
    }
    {
      Section s = root.sub("smoother");
      c.smoother.window = static_cast<int>(s.integer("window"));
      c.smoother.sigma = s.num("sigma");
    }
    {
      Section s = root.sub("gate");
      c.gate.alpha = s.num("alpha");
      c.gate.dwell_s = s.num("dwell_s");
      c.gate.window_s = s.num("window_s");
      c.gate.stride_s = s.num("stride_s");
      c.gate.min_coverage = s.num("min_coverage");
    }
    {
      Section s = root.sub("features");
      c.features.normalize = s.boolean("normalize");
      c.features.deadband_factor = s.num("deadband_factor");
    }
    {
      Section s = root.sub("svm");
      c.svm.C = s.num("C");
      const std::string mode = s.str("gamma_mode");
      if (mode == "scale") c.svm.gamma_mode = GammaMode::Scale;
      else if (mode == "auto") c.svm.gamma_mode = GammaMode::Auto;
      else if (mode == "fixed") c.svm.gamma_mode = GammaMode::Fixed;
      else invalid("svm.gamma_mode", "expected scale, auto or fixed");
      c.svm.gamma = s.num("gamma");
      c.svm.balanced = s.boolean("balanced");
      c.svm.tol = s.num("tol");
      c.svm.reject_threshold = s.num("reject_threshold");
    }
    {
      Section s = root.sub("synth");
      c.synth.n_per_class = static_cast<int>(s.integer("n_per_class"));
      c.synth.roster = s.strs("roster");
      c.synth.noise_sigma = s.num("noise_sigma");
      c.synth.occlusion_rate = s.num("occlusion_rate");
      c.synth.distractor_fraction = s.num("distractor_fraction");
      c.synth.fps = s.num("fps");
      c.synth.min_duration_s = s.num("min_duration_s");
      c.synth.max_duration_s = s.num("max_duration_s");
    }
    {
      Section s = root.sub("eval");
      c.eval.mot_iou_gate = s.num("mot_iou_gate");
      c.eval.folds = static_cast<int>(s.integer("folds"));
      c.eval.alphas = s.nums("alphas");
      c.eval.dwells_s = s.nums("dwells_s");
      c.eval.match_thresholds = s.nums("match_thresholds");
    }
    {
      Section s = root.sub("network");
      try {
        c.network.weight_mode = parse_weight_mode(s.str("weight_mode"));
      } catch (const Error& e) {
        if (e.code() == "MissingKey") throw;
        invalid("network.weight_mode", "expected count or confidence_sum");
      }
      c.network.merge_gap_s = s.num("merge_gap_s");
      c.network.roster = s.strs("roster");
    }
  }
  c.svm.seed = c.seed;
  c.svm.workers = c.workers;
  c.synth.seed = c.seed;
  c.validate();
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "FileNotFound", "cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  Json j;
  try {
    j = Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Config, "ParseError", "config file " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace herdgraph
