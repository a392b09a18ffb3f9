#include "herdgraph/pipeline.hpp"

#include <chrono>
#include <map>

#include "herdgraph/error.hpp"
#include "herdgraph/parallel.hpp"

namespace herdgraph {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string file_stem(const std::string& source_id) {
  std::string s;
  for (char ch : source_id) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '-' ||
                    ch == '_' || ch == '.';
    s += ok ? ch : '_';
  }
  return s.empty() ? std::string("stream") : s;
}

}  // namespace

StageTimes& StageTimes::operator+=(const StageTimes& o) {
  track_s += o.track_s;
  stabilize_s += o.stabilize_s;
  gate_s += o.gate_s;
  features_s += o.features_s;
  classify_s += o.classify_s;
  network_s += o.network_s;
  return *this;
}

std::vector<io::FeatureRow> feature_rows(const StreamMeta& meta, const std::vector<DyadWindow>& windows,
                                         const FeatureConfig& cfg, std::size_t* skipped) {
  std::vector<io::FeatureRow> rows;
  std::size_t skip = 0;
  for (const DyadWindow& w : windows) {
    io::FeatureRow r;
    try {
      r.features = extract(w, meta.fps, cfg);
    } catch (const Error& e) {
      if (e.code() != "InsufficientData") throw;
      ++skip;
      continue;
    }
    r.source_id = meta.source_id;
    r.track_a = w.track_a;
    r.track_b = w.track_b;
    r.identity_a = w.identity_a.value_or("");
    r.identity_b = w.identity_b.value_or("");
    r.span = w.span;
    rows.push_back(std::move(r));
  }
  if (skipped) *skipped = skip;
  return rows;
}

std::vector<InteractionEvent> events_from(const std::vector<io::FeatureRow>& rows,
                                          const std::vector<Prediction>& predictions) {
  std::vector<InteractionEvent> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Label l = predictions[i].label;
    if (!is_affiliative(l) && !is_agonistic(l)) continue;
    const auto& r = rows[i];
    const std::string a = r.identity_a.empty() ? "track:" + std::to_string(r.track_a) : r.identity_a;
    const std::string b = r.identity_b.empty() ? "track:" + std::to_string(r.track_b) : r.identity_b;
    out.push_back(make_event(r.source_id, a, b, l, r.span, predictions[i].confidence));
  }
  return out;
}

StreamOutput process_stream(const StreamMeta& meta, const std::vector<FrameRecord>& frames, const Config& cfg,
                            const SvmModel& model) {
  StreamOutput s;
  s.meta = meta;
  auto t0 = Clock::now();
  s.tracks = track_stream(frames, cfg.tracker, meta);
  s.times.track_s = since(t0);

  t0 = Clock::now();
  s.poses = stabilize_all(s.tracks, cfg.smoother);
  s.times.stabilize_s = since(t0);

  t0 = Clock::now();
  const auto wins = windows(s.poses, cfg.gate, meta);
  for (const auto& w : wins) s.windows.push_back(io::window_record(w));
  s.times.gate_s = since(t0);

  t0 = Clock::now();
  s.rows = feature_rows(meta, wins, cfg.features, &s.skipped_windows);
  s.times.features_s = since(t0);

  t0 = Clock::now();
  for (const auto& r : s.rows) s.predictions.push_back(model.predict(r.features));
  for (std::size_t i = 0; i < s.rows.size(); ++i) s.rows[i].label = s.predictions[i].label;
  s.events = merge_events(events_from(s.rows, s.predictions), meta.fps, cfg.network.merge_gap_s);
  s.times.classify_s = since(t0);
  return s;
}

NetworkOutput build_network(std::vector<InteractionEvent> events, const NetworkConfig& cfg) {
  NetworkOutput n;
  n.events = std::move(events);
  for (std::size_t i = 0; i < kLayers.size(); ++i) {
    n.graphs[i] = build_graph(n.events, kLayers[i], cfg.roster, cfg.weight_mode);
    n.metrics[i] = compute_metrics(n.graphs[i]);
  }
  return n;
}

PipelineResult run_pipeline(const std::vector<StreamInput>& inputs, const Config& cfg, const SvmModel& model) {
  PipelineResult r;
  r.streams.resize(inputs.size());
  parallel_for(inputs.size(), cfg.workers, [&](std::size_t i) {
    r.streams[i] = process_stream(inputs[i].meta, inputs[i].frames, cfg, model);
  });
  std::vector<InteractionEvent> events;
  for (const auto& s : r.streams) {
    events.insert(events.end(), s.events.begin(), s.events.end());
    r.times += s.times;
  }
  const auto t0 = Clock::now();
  r.network = build_network(std::move(events), cfg.network);
  r.times.network_s = since(t0);
  return r;
}

io::Json write_network(const std::filesystem::path& out_dir, const NetworkOutput& network) {
  io::Json graphs = io::Json::object();
  for (std::size_t i = 0; i < kLayers.size(); ++i) {
    const std::string name = layer_name(kLayers[i]);
    const auto& g = network.graphs[i];
    io::write_atomic(out_dir / ("graph_" + name + ".graphml"), io::graph_to_graphml(g));
    io::write_atomic(out_dir / ("graph_" + name + ".dot"), io::graph_to_dot(g));
    io::write_json(out_dir / ("metrics_" + name + ".json"), io::metrics_to_json(g, network.metrics[i]));
    graphs[name] = {{"nodes", g.nodes.size()}, {"edges", g.edges.size()}, {"total_weight", g.total_weight()}};
  }
  return graphs;
}

void write_pipeline_outputs(const std::filesystem::path& out_dir, const PipelineResult& result, const Config& cfg) {
  std::vector<io::FeatureRow> all_rows;
  io::Json streams = io::Json::array();
  std::size_t windows = 0, skipped = 0;
  for (const auto& s : result.streams) {
    const std::string stem = file_stem(s.meta.source_id);
    io::write_tracks(out_dir / "tracks" / (stem + ".jsonl"), s.meta, s.tracks);
    io::write_windows(out_dir / "windows" / (stem + ".jsonl"), s.meta, s.windows);
    all_rows.insert(all_rows.end(), s.rows.begin(), s.rows.end());
    windows += s.windows.size();
    skipped += s.skipped_windows;
    std::size_t rejected = 0;
    for (const auto& p : s.predictions) rejected += p.label == Label::NoInteraction;
    streams.push_back({{"source_id", s.meta.source_id},
                       {"tracks", s.tracks.size()},
                       {"windows", s.windows.size()},
                       {"feature_rows", s.rows.size()},
                       {"skipped_windows", s.skipped_windows},
                       {"rejected", rejected},
                       {"events", s.events.size()}});
  }
  io::write_features(out_dir / "features.csv", all_rows);
  io::write_events(out_dir / "events.jsonl", result.network.events);
  const io::Json graphs = write_network(out_dir, result.network);
  io::Json report;
  report["format"] = io::kFormatVersion;
  report["kind"] = "run_report";
  report["seed"] = cfg.seed;
  report["stream_count"] = result.streams.size();
  report["windows"] = windows;
  report["skipped_windows"] = skipped;
  report["events"] = result.network.events.size();
  report["graphs"] = std::move(graphs);
  report["streams"] = std::move(streams);
  report["config"] = config_to_json(cfg);
  report["config"].erase("workers");
  io::write_json(out_dir / "run_report.json", report);

  const StageTimes& t = result.times;
  io::write_json(out_dir / "timing.json", {{"format", io::kFormatVersion},
                                           {"kind", "timing"},
                                           {"track_s", t.track_s},
                                           {"stabilize_s", t.stabilize_s},
                                           {"gate_s", t.gate_s},
                                           {"features_s", t.features_s},
                                           {"classify_s", t.classify_s},
                                           {"network_s", t.network_s},
                                           {"workers", cfg.workers}});
}

std::vector<io::FeatureRow> training_rows(const std::vector<PreparedClip>& clips, const Config& cfg) {
  std::vector<std::vector<io::FeatureRow>> per(clips.size());
  parallel_for(clips.size(), cfg.workers, [&](std::size_t i) {
    const PreparedClip& c = clips[i];
    if (c.entry.label == Label::NoInteraction) return;
    const auto pair = dyad_tracks(c);
    if (!pair) return;
    const std::vector<PoseTrack> two = {*pair->first, *pair->second};
    per[i] = feature_rows(c.meta, windows(two, cfg.gate, c.meta), cfg.features);
    for (auto& r : per[i]) r.label = c.entry.label;
  });
  std::vector<io::FeatureRow> out;
  for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
  return out;
}

std::vector<LabeledClip> labeled_clips(const std::vector<io::FeatureRow>& rows) {
  std::vector<LabeledClip> out;
  for (const auto& r : rows) {
    if (!r.label || *r.label == Label::NoInteraction || *r.label == Label::InteractionPresent) continue;
    const std::string a = r.identity_a.empty() ? r.source_id + "#" + std::to_string(r.track_a) : r.identity_a;
    const std::string b = r.identity_b.empty() ? r.source_id + "#" + std::to_string(r.track_b) : r.identity_b;
    out.push_back({r.features, *r.label, group_key(a, b),
                   r.source_id + ":" + std::to_string(r.span.start) + "-" + std::to_string(r.span.end)});
  }
  return out;
}

std::vector<InteractionEvent> ground_truth_events(const std::vector<synth::CorpusEntry>& entries) {
  std::vector<InteractionEvent> out;
  for (const auto& e : entries) {
    if (e.label == Label::NoInteraction) continue;
    const auto frames = static_cast<std::int64_t>(std::llround(e.spec.duration_s * e.spec.fps));
    out.push_back(make_event(e.spec.source_id, e.spec.identity_a, e.spec.identity_b, e.label, {0, frames - 1}, 1.0));
  }
  return out;
}

io::Manifest write_corpus(const std::filesystem::path& dir, const std::vector<synth::CorpusEntry>& entries,
                          int workers) {
  io::Manifest m;
  m.files.resize(entries.size());
  parallel_for(entries.size(), workers, [&](std::size_t i) {
    const auto& e = entries[i];
    const synth::SyntheticClip clip = synth::generate(e.spec);
    const std::string rel = "frames/" + file_stem(e.clip_id) + ".jsonl";
    io::write_frames(dir / rel, clip.meta, clip.frames);
    io::ManifestFile& f = m.files[i];
    f.path = rel;
    f.role = "frames";
    f.attributes = {{"clip_id", e.clip_id},
                    {"label", std::string(label_name(e.label))},
                    {"distractor", e.distractor},
                    {"template", synth::template_name(e.spec.tmpl)},
                    {"identity_a", e.spec.identity_a},
                    {"identity_b", e.spec.identity_b},
                    {"duration_s", e.spec.duration_s},
                    {"fps", e.spec.fps},
                    {"noise_sigma", e.spec.noise_sigma},
                    {"occlusion_rate", e.spec.occlusion_rate},
                    {"seed", e.spec.seed},
                    {"curve",
                     {{"offset", clip.curve.offset},
                      {"amplitude", clip.curve.amplitude},
                      {"omega", clip.curve.omega},
                      {"phase", clip.curve.phase},
                      {"duration", clip.curve.duration}}}};
  });
  io::write_manifest(dir / "manifest.json", m);
  return m;
}

std::vector<StreamInput> read_streams(const std::filesystem::path& manifest_path) {
  const io::Manifest m = io::read_manifest(manifest_path);
  std::vector<StreamInput> out;
  for (const auto* f : m.with_role("frames")) {
    auto [meta, frames] = io::read_frames(manifest_path.parent_path() / f->path);
    out.push_back({std::move(meta), std::move(frames)});
  }
  return out;
}

std::vector<synth::CorpusEntry> corpus_entries(const std::filesystem::path& manifest_path) {
  const io::Manifest m = io::read_manifest(manifest_path);
  std::vector<synth::CorpusEntry> out;
  for (const auto* f : m.with_role("frames")) {
    const auto& a = f->attributes;
    try {
      synth::CorpusEntry e;
      e.clip_id = a.at("clip_id").get<std::string>();
      e.label = parse_label(a.at("label").get<std::string>());
      e.distractor = a.at("distractor").get<bool>();
      e.spec.tmpl = synth::parse_template(a.at("template").get<std::string>());
      e.spec.identity_a = a.at("identity_a").get<std::string>();
      e.spec.identity_b = a.at("identity_b").get<std::string>();
      e.spec.duration_s = a.at("duration_s").get<double>();
      e.spec.fps = a.at("fps").get<double>();
      e.spec.noise_sigma = a.at("noise_sigma").get<double>();
      e.spec.occlusion_rate = a.at("occlusion_rate").get<double>();
      e.spec.seed = a.at("seed").get<std::uint64_t>();
      e.spec.source_id = e.clip_id;
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorKind::Schema, "SchemaError",
                  manifest_path.string() + ": frames entry '" + f->path + "' lacks corpus attributes: " + ex.what());
    }
  }
  return out;
}

}  // namespace herdgraph
