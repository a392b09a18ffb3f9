#include "herdgraph/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <unistd.h>

#include <Eigen/Eigenvalues>

#include "herdgraph/assignment.hpp"
#include "herdgraph/config.hpp"
#include "herdgraph/dyad.hpp"
#include "herdgraph/error.hpp"
#include "herdgraph/evalkit.hpp"
#include "herdgraph/features.hpp"
#include "herdgraph/io.hpp"
#include "herdgraph/pipeline.hpp"
#include "herdgraph/socialnet.hpp"
#include "herdgraph/svm.hpp"
#include "herdgraph/synthlab.hpp"
#include "herdgraph/tracker.hpp"

namespace herdgraph {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!passed) detail << "; ";
      else detail.str("");
      passed = false;
      detail << what;
    }
  }
};

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Config base_config(const AcceptanceOptions& opts) {
  Config c;
  c.seed = opts.seed;
  c.workers = opts.workers;
  c.svm.seed = opts.seed;
  c.svm.workers = opts.workers;
  c.synth.seed = opts.seed;
  return c;
}

// Shared corpus for the comparison, ablation and sensitivity checks:
// 150 interaction clips plus 25% passive-proximity distractors at moderate noise.
class CorpusCache {
 public:
  explicit CorpusCache(const AcceptanceOptions& opts) : cfg_(base_config(opts)) {}

  const std::vector<PreparedClip>& clips() {
    if (!prepared_) prepared_ = prepare_corpus(synth::corpus(cfg_.synth), cfg_);
    return *prepared_;
  }
  const Config& config() const { return cfg_; }

 private:
  Config cfg_;
  std::optional<std::vector<PreparedClip>> prepared_;
};

// ---------------------------------------------------------------------------

void gate_boundary(Outcome& o) {
  const BBox a = BBox::from_center(100.0, 100.0, 240.0, 100.0);
  const double limit = 0.35 * (diagonal(a) + diagonal(a));
  const BBox at = BBox::from_center(100.0 + limit, 100.0, 240.0, 100.0);
  const double d_at = center_distance(a, at);
  o.require(d_at == limit, "constructed distance " + num(d_at, 17) + " != limit " + num(limit, 17));
  o.require(proximate(a, at, 0.35), "boundary pair not proximate");
  const BBox past = BBox::from_center(std::nextafter(100.0 + limit, 1e9), 100.0, 240.0, 100.0);
  o.require(center_distance(a, past) > limit, "epsilon step did not exceed the limit");
  o.require(!proximate(a, past, 0.35), "pair past the limit still proximate");
  if (o.passed) o.detail << "limit " << num(limit, 6) << " px proximate, next double above rejected";
}

void dwell_filter(Outcome& o) {
  o.require(dwell_frames(4.0, 30.0) == 120, "dwell_frames(4 s, 30 fps) = " + std::to_string(dwell_frames(4.0, 30.0)));
  std::vector<bool> run120(140, false), run119(140, false);
  std::fill(run120.begin() + 10, run120.begin() + 130, true);
  std::fill(run119.begin() + 10, run119.begin() + 129, true);
  const auto s120 = dwell_segments(run120, 4.0, 30.0);
  const auto s119 = dwell_segments(run119, 4.0, 30.0);
  o.require(s120.size() == 1 && s120[0] == FrameInterval{10, 129}, "120-frame run did not survive");
  o.require(s119.empty(), "119-frame run survived");
  if (o.passed) o.detail << "120 frames kept as [10,129], 119 frames dropped";
}

// Analytic reference for one window: the same statistics computed from the
// closed-form curve at the window's frame times.
void feature_oracle(Outcome& o, const AcceptanceOptions& opts) {
  Config cfg = base_config(opts);
  cfg.smoother = SmootherConfig::with_window(1);
  const double fps = 60.0;
  double worst_mean = 0.0, worst_dddt = 0.0, worst_zcr = 0.0;
  int checked = 0;
  const synth::Template templates[] = {synth::Template::Grooming, synth::Template::Headbutt,
                                       synth::Template::Displacement};
  for (int rep = 0; rep < 2; ++rep) {
    for (const synth::Template t : templates) {
      synth::CorpusEntry e;
      e.clip_id = "oracle";
      e.spec.tmpl = t;
      e.spec.fps = fps;
      e.spec.duration_s = 8.0;
      e.spec.seed = synth::derive_seed(opts.seed, static_cast<std::uint64_t>(10 * rep + static_cast<int>(t)));
      e.label = synth::template_label(t);
      const synth::SyntheticClip clip = synth::generate(e.spec);
      Config one = cfg;
      one.workers = 1;
      const auto prepared = prepare_corpus({e}, one);
      const auto pair = dyad_tracks(prepared[0]);
      if (!pair) {
        o.require(false, std::string(synth::template_name(t)) + ": dyad tracks not found");
        continue;
      }
      const auto w = longest_segment(*pair->first, *pair->second, cfg.gate, prepared[0].meta);
      if (!w) {
        o.require(false, std::string(synth::template_name(t)) + ": no gated segment");
        continue;
      }
      const FeatureVector f = extract(*w, fps, cfg.features);

      std::vector<double> d, d1, d2;
      for (std::int64_t k = w->span.start; k <= w->span.end; ++k) {
        const double tk = static_cast<double>(k) / fps;
        d.push_back(clip.curve.value(tk));
        if (k > w->span.start && k < w->span.end) {
          d1.push_back(clip.curve.first(tk));
          d2.push_back(clip.curve.second(tk));
        }
      }
      const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
      const double dddt = std::accumulate(d1.begin(), d1.end(), 0.0) / static_cast<double>(d1.size());
      double m2 = std::accumulate(d2.begin(), d2.end(), 0.0) / static_cast<double>(d2.size());
      double var2 = 0.0;
      for (double v : d2) var2 += (v - m2) * (v - m2);
      const double deadband = cfg.features.deadband_factor * std::sqrt(var2 / static_cast<double>(d2.size()));
      const double zcr = zero_crossing_rate(d2, std::vector<bool>(d2.size(), true), fps, deadband);

      const auto mi = feature_index(SeriesKind::MinPair, Statistic::Mean);
      const auto di = feature_index(SeriesKind::MinPair, Statistic::Derivative);
      const auto zi = feature_index(SeriesKind::MinPair, Statistic::ZeroCrossing);
      worst_mean = std::max(worst_mean, std::abs(f[mi] - mean));
      worst_dddt = std::max(worst_dddt, std::abs(f[di] - dddt));
      worst_zcr = std::max(worst_zcr, std::abs(f[zi] - zcr));
      ++checked;
    }
  }
  const double tol = 1e-3;
  o.require(worst_mean <= tol, "mean error " + num(worst_mean, 6));
  o.require(worst_dddt <= tol, "derivative error " + num(worst_dddt, 6));
  o.require(worst_zcr <= tol, "zcr error " + num(worst_zcr, 6));
  if (o.passed) {
    o.detail << checked << " clips at 60 fps, max |err| mean " << num(worst_mean, 7) << ", dddt "
             << num(worst_dddt, 7) << ", zcr " << num(worst_zcr, 7);
  }
}

// Dense reference QP: accelerated projected gradient on the dual with an
// exact projection onto {0 <= a <= c, y'a = 0} by bisection on the multiplier.
std::vector<double> project_feasible(const std::vector<double>& v, std::span<const double> y,
                                     std::span<const double> c) {
  auto at = [&](double lambda, std::vector<double>& out) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out[i] = std::clamp(v[i] - lambda * y[i], 0.0, c[i]);
      s += out[i] * y[i];
    }
    return s;
  };
  std::vector<double> out(v.size());
  double lo = -1.0, hi = 1.0;
  while (at(lo, out) < 0.0) lo *= 2.0;
  while (at(hi, out) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (at(mid, out) > 0.0 ? lo : hi) = mid;
  }
  at(0.5 * (lo + hi), out);
  return out;
}

double reference_qp(const Eigen::MatrixXd& kernel, std::span<const double> y, std::span<const double> c) {
  const auto n = static_cast<Eigen::Index>(y.size());
  Eigen::MatrixXd q(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) q(i, j) = y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)] * kernel(i, j);
  const double lipschitz = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q).eigenvalues().maxCoeff();
  const double step = 1.0 / lipschitz;
  std::vector<double> x(static_cast<std::size_t>(n), 0.0), prev = x, z = x;
  double t = 1.0;
  for (int it = 0; it < 50000; ++it) {
    Eigen::Map<const Eigen::VectorXd> zv(z.data(), n);
    const Eigen::VectorXd grad = q * zv - Eigen::VectorXd::Ones(n);
    std::vector<double> v(z);
    for (Eigen::Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= step * grad(i);
    prev = x;
    x = project_feasible(v, y, c);
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + ((t - 1.0) / tn) * (x[i] - prev[i]);
    z = project_feasible(z, y, c);
    t = tn;
    double moved = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) moved = std::max(moved, std::abs(x[i] - prev[i]));
    if (it > 100 && moved < 1e-13) break;
  }
  return dual_objective(kernel, y, x);
}

void smo_correctness(Outcome& o, const AcceptanceOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int instances = 0;
  double worst_gap = 0.0, worst_kkt = 0.0;
  for (int inst = 0; inst < 24; ++inst) {
    const std::size_t n = 10 + static_cast<std::size_t>(inst) % 31;
    const std::size_t dim = 2 + static_cast<std::size_t>(inst) % 3;
    std::vector<double> x(n * dim), y(n), c(n);
    const double cost = 0.5 + 9.5 * (0.5 + 0.5 * u(rng));
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = i % 2 == 0 ? 1.0 : -1.0;
      for (std::size_t k = 0; k < dim; ++k) x[i * dim + k] = u(rng) + 0.4 * y[i];
      c[i] = y[i] > 0 ? cost : 1.3 * cost;
    }
    const double gamma = 0.5 + 0.5 * (0.5 + 0.5 * u(rng));
    const Eigen::MatrixXd kernel = rbf_gram(x, dim, gamma);
    const SmoSolution s = smo_solve(kernel, y, c);
    const double ref = reference_qp(kernel, y, c);
    const double rel = (ref - s.objective) / std::max(1e-12, std::abs(ref));
    worst_gap = std::max(worst_gap, std::abs(rel));
    o.require(s.converged, "instance " + std::to_string(inst) + " did not converge");
    o.require(rel <= 1e-3, "instance " + std::to_string(inst) + " objective gap " + num(rel, 6));
    const auto ni = static_cast<Eigen::Index>(n);
    double eq = 0.0;
    for (Eigen::Index i = 0; i < ni; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      double f = s.bias;
      for (Eigen::Index j = 0; j < ni; ++j) f += s.alpha[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)] * kernel(i, j);
      const double yf = y[ui] * f;
      const double a = s.alpha[ui];
      const double eps = 1e-9 * c[ui];
      double v = 0.0;
      if (a <= eps) v = std::max(0.0, 1.0 - yf);
      else if (a >= c[ui] - eps) v = std::max(0.0, yf - 1.0);
      else v = std::abs(yf - 1.0);
      o.require(a >= -1e-12 && a <= c[ui] + 1e-12, "alpha outside its box");
      worst_kkt = std::max(worst_kkt, v);
      eq += a * y[ui];
    }
    o.require(std::abs(eq) <= 1e-6, "equality constraint violated by " + num(eq, 9));
    ++instances;
  }
  o.require(worst_kkt <= 1e-3, "KKT violation " + num(worst_kkt, 6));
  if (o.passed) {
    o.detail << instances << " instances (n 10-40), max relative objective gap " << num(worst_gap, 7)
             << ", max KKT violation " << num(worst_kkt, 7);
  }
}

void headline(Outcome& o, CorpusCache& cache) {
  const BaselineComparison c = compare_baseline(cache.clips(), cache.config());
  const double svm = c.svm.cls.macro_f1;
  const double base = c.majority.cls.macro_f1;
  o.require(svm - base >= 0.15, "macro-F1 gap " + num(svm - base) + " < 0.15");
  o.detail << (o.passed ? "" : "; ") << "keypoint macro-F1 " << num(svm) << " vs proximity baseline " << num(base)
           << " over " << cache.clips().size() << " clips; occurrence FPR " << num(c.svm.occurrence.false_positive_rate)
           << " vs " << num(c.occurrence.occurrence.false_positive_rate);
}

void ablation(Outcome& o, CorpusCache& cache) {
  const auto rows = ablate(cache.clips(), cache.config());
  std::map<FeatureSet, double> f1;
  for (const auto& r : rows) f1[r.set] = r.macro_f1;
  const double full = f1[FeatureSet::Full];
  const double minus_rate = f1[FeatureSet::MinusRateOfChange];
  const double mean_only = f1[FeatureSet::MeanDistanceOnly];
  o.require(full >= minus_rate, "full < minus-rate-of-change");
  o.require(minus_rate >= mean_only, "minus-rate-of-change < mean-distance-only");
  o.require(full - mean_only >= 0.10, "full - mean-only gap " + num(full - mean_only) + " < 0.10");
  o.detail << (o.passed ? "" : "; ") << "macro-F1 full " << num(full) << ", minus-rate " << num(minus_rate)
           << ", minus-transitions " << num(f1[FeatureSet::MinusTransitions]) << ", mean-only " << num(mean_only);
}

void sensitivity_grid(Outcome& o, CorpusCache& cache) {
  const auto cells = sensitivity(cache.clips(), cache.config());
  Config serial = cache.config();
  serial.workers = 1;
  serial.svm.workers = 1;
  const auto again = sensitivity(cache.clips(), serial);
  const std::string csv = sensitivity_csv(cells);
  o.require(csv == sensitivity_csv(again), "grid differs between runs");
  o.require(cells.size() == 9, "expected 9 cells, got " + std::to_string(cells.size()));
  o.require(std::count(csv.begin(), csv.end(), '\n') == 10, "table is not header plus 9 rows");
  std::map<double, std::vector<std::pair<double, std::size_t>>> by_dwell;
  for (const auto& c : cells) by_dwell[c.dwell_s].push_back({c.alpha, c.candidates});
  for (auto& [dwell, list] : by_dwell) {
    std::sort(list.begin(), list.end());
    for (std::size_t i = 1; i < list.size(); ++i) {
      o.require(list[i].second >= list[i - 1].second, "candidates decrease in alpha at T=" + num(dwell, 1));
    }
  }
  if (o.passed) {
    o.detail << "9 cells, identical across worker counts; candidates by alpha per T:";
    for (const auto& [dwell, list] : by_dwell) {
      o.detail << " T=" << num(dwell, 0) << "[";
      for (std::size_t i = 0; i < list.size(); ++i) o.detail << (i ? "," : "") << list[i].second;
      o.detail << "]";
    }
  }
}

// ---------------------------------------------------------------------------

std::vector<GroundTruthFrame> toy_truth() {
  std::vector<GroundTruthFrame> gt;
  for (std::int64_t f = 0; f < 10; ++f) {
    GroundTruthFrame g;
    g.frame_index = f;
    g.boxes = {{"A", BBox{0, 0, 10, 10}}, {"B", BBox{100, 0, 110, 10}}, {"C", BBox{200, 0, 210, 10}}};
    gt.push_back(g);
  }
  return gt;
}

void mot_metrics(Outcome& o, const AcceptanceOptions& opts) {
  const auto gt = toy_truth();
  std::vector<TrackedFrame> perfect, swapped;
  for (const auto& g : gt) {
    TrackedFrame t{g.frame_index, {{1, g.boxes[0].second}, {2, g.boxes[1].second}, {3, g.boxes[2].second}}};
    perfect.push_back(t);
    if (g.frame_index >= 5) std::swap(t.boxes[0].id, t.boxes[1].id);
    swapped.push_back(t);
  }
  const MotReport p = mot_evaluate(gt, perfect);
  o.require(p.mota == 1.0 && p.idf1 == 1.0 && p.id_switches == 0, "perfect toy: MOTA " + num(p.mota) + " IDF1 " +
                                                                       num(p.idf1) + " IDSW " + std::to_string(p.id_switches));
  const MotReport s = mot_evaluate(gt, swapped);
  // 30 GT boxes, 2 switches; best identity matching keeps 5 + 5 + 10 of 30.
  const double mota = 1.0 - 2.0 / 30.0;
  const double idf1 = 2.0 * 20.0 / 60.0;
  o.require(s.id_switches == 2, "swap toy: " + std::to_string(s.id_switches) + " switches");
  o.require(std::abs(s.mota - mota) < 1e-12, "swap toy MOTA " + num(s.mota, 6));
  o.require(std::abs(s.idf1 - idf1) < 1e-12, "swap toy IDF1 " + num(s.idf1, 6));

  // Crossing scenarios: two animals pass each other with full-confidence boxes.
  std::size_t switches = 0;
  int scenarios = 0;
  for (double offset : {0.0, 15.0, 40.0}) {
    for (double speed : {4.0, 8.0, 12.0}) {
      std::vector<FrameRecord> frames;
      const StreamMeta meta{30.0, 3840, 2160, "crossing"};
      for (std::int64_t f = 0; f < 150; ++f) {
        FrameRecord r;
        r.frame_index = f;
        r.timestamp_s = timestamp_of(f, meta.fps);
        const double dx = speed * static_cast<double>(f);
        r.detections.push_back({BBox::from_center(400.0 + dx, 500.0, 240.0, 100.0), 0.95, "A", std::nullopt});
        r.detections.push_back({BBox::from_center(400.0 + 150.0 * speed - dx, 500.0 + offset, 240.0, 100.0), 0.95,
                                "B", std::nullopt});
        frames.push_back(std::move(r));
      }
      const auto tracks = track_stream(frames, TrackerConfig{}, meta);
      const MotReport r = mot_evaluate(ground_truth_from_identities(frames), tracked_frames(tracks));
      switches += r.id_switches;
      ++scenarios;
    }
  }
  o.require(switches == 0, std::to_string(switches) + " ID switches over crossing scenarios");

  // Hungarian against exhaustive search.
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int hungarian = 0;
  for (int rows = 1; rows <= 6; ++rows) {
    for (int cols = 1; cols <= 6; ++cols) {
      for (int rep = 0; rep < 5; ++rep) {
        Eigen::MatrixXd cost(rows, cols);
        for (int i = 0; i < rows; ++i)
          for (int j = 0; j < cols; ++j) cost(i, j) = rep == 0 ? std::floor(4.0 * u(rng)) : u(rng);
        const auto match = solve_min_cost(cost);
        double got = 0.0;
        for (int i = 0; i < rows; ++i)
          if (match[static_cast<std::size_t>(i)] >= 0) got += cost(i, match[static_cast<std::size_t>(i)]);
        // Enumerate injections of the smaller side into the larger one.
        const bool tall = rows > cols;
        const int small = std::min(rows, cols), large = std::max(rows, cols);
        std::vector<int> perm(static_cast<std::size_t>(large));
        std::iota(perm.begin(), perm.end(), 0);
        double best = 1e300;
        do {
          double s = 0.0;
          for (int k = 0; k < small; ++k) s += tall ? cost(perm[static_cast<std::size_t>(k)], k) : cost(k, perm[static_cast<std::size_t>(k)]);
          best = std::min(best, s);
        } while (std::next_permutation(perm.begin(), perm.end()));
        o.require(std::abs(got - best) <= 1e-9, "Hungarian " + num(got, 9) + " vs brute force " + num(best, 9));
        ++hungarian;
      }
    }
  }
  if (o.passed) {
    o.detail << "toys exact (swap: MOTA " << num(s.mota) << ", IDF1 " << num(s.idf1) << ", 2 switches); "
             << scenarios << " crossings with 0 switches; " << hungarian << " Hungarian cases match brute force";
  }
}

Config zero_noise_config(const AcceptanceOptions& opts, int n_per_class, std::uint64_t seed) {
  Config cfg = base_config(opts);
  cfg.synth.noise_sigma = 0.0;
  cfg.synth.occlusion_rate = 0.0;
  cfg.synth.n_per_class = n_per_class;
  cfg.synth.seed = seed;
  return cfg;
}

SvmModel pipeline_model(const Config& train_cfg) {
  const auto clips = prepare_corpus(synth::corpus(train_cfg.synth), train_cfg);
  return train(labeled_clips(training_rows(clips, train_cfg)), train_cfg.svm, feature_columns(FeatureSet::Full));
}

std::vector<StreamInput> generate_streams(const std::vector<synth::CorpusEntry>& entries) {
  std::vector<StreamInput> in;
  for (const auto& e : entries) {
    synth::SyntheticClip c = synth::generate(e.spec);
    in.push_back({c.meta, std::move(c.frames)});
  }
  return in;
}

void conservation(Outcome& o, const AcceptanceOptions& opts) {
  const SvmModel model = pipeline_model(zero_noise_config(opts, 30, opts.seed + 1));
  const Config cfg = zero_noise_config(opts, 10, opts.seed + 2);
  const auto entries = synth::corpus(cfg.synth);
  const PipelineResult run = run_pipeline(generate_streams(entries), cfg, model);
  const NetworkOutput truth =
      build_network(merge_events(ground_truth_events(entries), cfg.synth.fps, cfg.network.merge_gap_s), cfg.network);

  std::ostringstream counts;
  for (std::size_t l = 0; l < kLayers.size(); ++l) {
    const Layer layer = kLayers[l];
    std::size_t predicted_events = 0, truth_events = 0;
    for (const auto& e : run.network.events) predicted_events += in_layer(e.label, layer);
    for (const auto& e : truth.events) truth_events += in_layer(e.label, layer);
    const double w = run.network.graphs[l].total_weight();
    o.require(w == static_cast<double>(predicted_events),
              std::string(layer_name(layer)) + ": weight " + num(w, 0) + " != its merged events");
    o.require(w == static_cast<double>(truth_events), std::string(layer_name(layer)) + ": weight " + num(w, 0) +
                                                          " != ground-truth events " + std::to_string(truth_events));
    std::size_t edge_diffs = 0;
    for (const auto& e : truth.graphs[l].edges) edge_diffs += run.network.graphs[l].weight(e.a, e.b) != e.weight;
    for (const auto& e : run.network.graphs[l].edges) edge_diffs += truth.graphs[l].weight(e.a, e.b) == 0.0;
    o.require(edge_diffs == 0, std::string(layer_name(layer)) + ": " + std::to_string(edge_diffs) + " edges differ");
    counts << (l ? ", " : "") << layer_name(layer) << " " << num(w, 0) << "/" << truth_events;
  }
  std::size_t missed = 0, spurious = 0;
  std::map<std::string, int> per_clip;
  for (const auto& e : run.network.events) per_clip[e.source_id]++;
  for (const auto& e : entries) {
    if (e.label == Label::NoInteraction) spurious += per_clip[e.clip_id] > 0;
    else missed += per_clip[e.clip_id] == 0;
  }
  o.detail << (o.passed ? "" : "; ") << "graph/ground-truth weight " << counts.str() << "; " << missed
           << " interaction clips without an event, " << spurious << " distractors with events";
}

std::map<std::string, std::string> directory_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().filename() == "timing.json") continue;
    out[fs::relative(e.path(), dir).string()] = io::read_text(e.path());
  }
  return out;
}

void determinism(Outcome& o, const AcceptanceOptions& opts) {
  const fs::path root = fs::temp_directory_path() / ("herdgraph-accept-" + std::to_string(::getpid()));
  fs::remove_all(root);
  Config train_cfg = zero_noise_config(opts, 6, opts.seed + 3);
  train_cfg.synth.noise_sigma = 0.01;
  train_cfg.synth.occlusion_rate = 0.02;
  const SvmModel model = pipeline_model(train_cfg);

  Config cfg = base_config(opts);
  cfg.synth.n_per_class = 3;
  cfg.synth.seed = opts.seed + 4;
  const auto entries = synth::corpus(cfg.synth);

  std::vector<std::map<std::string, std::string>> runs;
  for (int workers : {1, 2, opts.workers > 2 ? opts.workers : 4}) {
    Config c = cfg;
    c.workers = workers;
    c.svm.workers = workers;
    const fs::path dir = root / ("w" + std::to_string(workers));
    write_corpus(dir / "corpus", entries, workers);
    const PipelineResult run = run_pipeline(read_streams(dir / "corpus" / "manifest.json"), c, model);
    write_pipeline_outputs(dir / "out", run, c);
    runs.push_back(directory_bytes(dir));
  }
  std::size_t files = runs[0].size();
  for (std::size_t r = 1; r < runs.size(); ++r) {
    o.require(runs[r].size() == files, "file sets differ across worker counts");
    for (const auto& [name, bytes] : runs[0]) {
      auto it = runs[r].find(name);
      o.require(it != runs[r].end() && it->second == bytes, name + " differs across worker counts");
    }
  }

  // Round-trips.
  const fs::path rt = root / "roundtrip";
  fs::create_directories(rt);
  io::save_model(rt / "model.json", model);
  const SvmModel back = io::load_model(rt / "model.json");
  o.require(io::model_to_json(back).dump() == io::model_to_json(model).dump(), "model json changed on reload");
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> f(kFeatureDim);
    for (double& v : f) v = g(rng);
    const Prediction a = model.predict(f), b = back.predict(f);
    o.require(a.label == b.label && a.confidence == b.confidence && a.mean_margins == b.mean_margins,
              "reloaded model predicts differently");
  }

  const synth::SyntheticClip clip = synth::generate(entries.front().spec);
  io::write_frames(rt / "frames.jsonl", clip.meta, clip.frames);
  const auto [meta, frames] = io::read_frames(rt / "frames.jsonl");
  o.require(meta == clip.meta && frames == clip.frames, "frames changed on reload");

  const PipelineResult run = run_pipeline(generate_streams(entries), cfg, model);
  for (const SocialGraph& graph : run.network.graphs) {
    const std::string text = io::graph_to_graphml(graph);
    const SocialGraph parsed = io::graph_from_graphml(text);
    o.require(io::graph_to_graphml(parsed) == text, std::string(layer_name(graph.layer)) + " graph changed on reload");
  }
  fs::remove_all(root);
  if (o.passed) {
    o.detail << files << " files byte-identical for workers 1/2/" << (opts.workers > 2 ? opts.workers : 4)
             << "; model, frames and graphs round-trip exactly";
  }
}

}  // namespace

std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opts) {
  CorpusCache cache(opts);
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> checks = {
      {"gate-boundary", gate_boundary},
      {"dwell-filter", dwell_filter},
      {"feature-oracle", [&](Outcome& o) { feature_oracle(o, opts); }},
      {"smo-correctness", [&](Outcome& o) { smo_correctness(o, opts); }},
      {"headline-ordering", [&](Outcome& o) { headline(o, cache); }},
      {"ablation-ordering", [&](Outcome& o) { ablation(o, cache); }},
      {"sensitivity-grid", [&](Outcome& o) { sensitivity_grid(o, cache); }},
      {"mot-metrics", [&](Outcome& o) { mot_metrics(o, opts); }},
      {"conservation", [&](Outcome& o) { conservation(o, opts); }},
      {"determinism-roundtrip", [&](Outcome& o) { determinism(o, opts); }},
  };
  std::vector<CheckResult> out;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) continue;
    CheckResult r;
    r.id = id;
    r.name = checks[i].first;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      checks[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = o.passed;
    r.detail = o.detail.str();
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_check(const CheckResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s %2d %-22s (%.2f s): ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds);
  return head + r.detail;
}

}  // namespace herdgraph
