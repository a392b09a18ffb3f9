// herdgraph command-line front end.
//
// Exit codes: 0 ok, 1 usage, 2 config, 3 schema or parse, 4 data, 5 check failed.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "herdgraph/acceptance.hpp"
#include "herdgraph/config.hpp"
#include "herdgraph/dyad.hpp"
#include "herdgraph/error.hpp"
#include "herdgraph/evalkit.hpp"
#include "herdgraph/io.hpp"
#include "herdgraph/kernels.hpp"
#include "herdgraph/pipeline.hpp"
#include "herdgraph/posestream.hpp"
#include "herdgraph/synthlab.hpp"
#include "herdgraph/tracker.hpp"

namespace fs = std::filesystem;
using namespace herdgraph;

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kSchema = 3, kData = 4, kCheckFailed = 5 };

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out_dir = ".";
  bool check = false;
};

Config resolve_config(const Globals& g) {
  Config c = g.config_path.empty() ? Config{} : load_config(g.config_path);
  if (g.seed) {
    c.seed = *g.seed;
    c.svm.seed = *g.seed;
    c.synth.seed = *g.seed;
  }
  if (g.workers) {
    c.workers = *g.workers;
    c.svm.workers = *g.workers;
  }
  c.validate();
  if (c.simd == "scalar") kernels::set_level(kernels::SimdLevel::Scalar);
  if (c.simd == "avx2") kernels::set_level(kernels::SimdLevel::Avx2);
  return c;
}

void note(const std::string& msg) { std::fprintf(stderr, "herdgraph: %s\n", msg.c_str()); }

std::vector<synth::CorpusEntry> entries_for(const std::string& manifest, const Config& cfg) {
  return manifest.empty() ? synth::corpus(cfg.synth) : corpus_entries(manifest);
}

std::vector<io::WindowRecord> window_records(const std::vector<DyadWindow>& ws) {
  std::vector<io::WindowRecord> out;
  for (const auto& w : ws) out.push_back(io::window_record(w));
  return out;
}

// Pools several streams into one MOT evaluation by giving each stream a
// disjoint frame range, track-id range and identity namespace.
MotReport pooled_mot(const std::vector<StreamInput>& streams, const Config& cfg) {
  std::vector<GroundTruthFrame> gt;
  std::vector<TrackedFrame> tracked;
  std::int64_t frame_offset = 0;
  TrackId id_offset = 0;
  for (const auto& s : streams) {
    const auto tracks = track_stream(s.frames, cfg.tracker, s.meta);
    std::int64_t last = 0;
    for (auto g : ground_truth_from_identities(s.frames)) {
      g.frame_index += frame_offset;
      for (auto& [id, box] : g.boxes) id = s.meta.source_id + "/" + id;
      gt.push_back(std::move(g));
    }
    TrackId max_id = 0;
    for (auto t : tracked_frames(tracks)) {
      last = std::max(last, t.frame_index);
      t.frame_index += frame_offset;
      for (auto& b : t.boxes) {
        max_id = std::max(max_id, b.id);
        b.id += id_offset;
      }
      tracked.push_back(std::move(t));
    }
    for (const auto& f : s.frames) last = std::max(last, f.frame_index);
    frame_offset += last + 1;
    id_offset += max_id;
  }
  return mot_evaluate(gt, tracked, cfg.eval.mot_iou_gate);
}

int run_check(const Globals& g) {
  AcceptanceOptions opts;
  if (g.seed) opts.seed = *g.seed;
  if (g.workers) opts.workers = *g.workers;
  bool all = true;
  for (const auto& r : run_acceptance(opts)) {
    std::printf("%s\n", format_check(r).c_str());
    all = all && r.passed;
  }
  return all ? kOk : kCheckFailed;
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Config: return kConfig;
    case ErrorKind::Schema:
    case ErrorKind::Parse: return kSchema;
    case ErrorKind::Data: return kData;
    case ErrorKind::Usage: return kUsage;
  }
  return kData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"herdgraph: cattle interaction inference from tracked keypoints"};
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  Globals g;
  app.add_option("--config", g.config_path, "JSON configuration (every key required)")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Override the master seed");
  app.add_option("--workers", g.workers, "Override the worker count")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir, "Directory for outputs");
  app.add_flag("--check", g.check, "Run the acceptance checks and exit (5 on failure)");
  app.require_subcommand(0, 1);

  std::string input, output, manifest, model_path, features_path, events_path, tmpl;
  std::vector<std::string> inputs;
  double duration = 8.0, noise = -1.0, fps = 30.0;
  std::int64_t gt_every = 1;

  auto* config_cmd = app.add_subcommand("config", "Print the effective configuration as JSON");

  auto* synth_cmd = app.add_subcommand("synth", "Generate a labeled synthetic corpus, or one clip with --template");
  synth_cmd->add_option("--template", tmpl, "grooming, headbutt, displacement, passive_proximity or no_contact");
  synth_cmd->add_option("--duration", duration, "Clip length in seconds (single clip)");
  synth_cmd->add_option("--noise", noise, "Keypoint noise in normalized units (default from config)");
  synth_cmd->add_option("-o,--output", output, "Frame file for a single clip");

  auto* track_cmd = app.add_subcommand("track", "Track detections in a frame file");
  track_cmd->add_option("-i,--input", input, "Frame JSONL")->required()->check(CLI::ExistingFile);
  track_cmd->add_option("-o,--output", output, "Track JSONL")->required();

  auto* stab_cmd = app.add_subcommand("stabilize", "Smooth keypoint trajectories of a track file");
  stab_cmd->add_option("-i,--input", input, "Track JSONL")->required()->check(CLI::ExistingFile);
  stab_cmd->add_option("-o,--output", output, "Pose JSONL")->required();

  auto* gate_cmd = app.add_subcommand("gate", "Proximity and dwell gating of a pose file");
  gate_cmd->add_option("-i,--input", input, "Pose JSONL")->required()->check(CLI::ExistingFile);
  gate_cmd->add_option("-o,--output", output, "Window JSONL")->required();

  auto* feat_cmd = app.add_subcommand("features", "Gate a pose file and extract window features");
  feat_cmd->add_option("-i,--input", input, "Pose JSONL")->required()->check(CLI::ExistingFile);
  feat_cmd->add_option("-o,--output", output, "Feature CSV")->required();

  auto* train_cmd = app.add_subcommand("train", "Train the classifier from a corpus manifest or a labeled feature CSV");
  auto* train_src = train_cmd->add_option_group("source");
  train_src->add_option("--manifest", manifest, "Corpus manifest")->check(CLI::ExistingFile);
  train_src->add_option("--features", features_path, "Labeled feature CSV")->check(CLI::ExistingFile);
  train_src->require_option(1);
  train_cmd->add_option("-o,--output", output, "Model JSON")->required();

  auto* classify_cmd = app.add_subcommand("classify", "Classify feature rows and emit merged events");
  classify_cmd->add_option("--model", model_path, "Model JSON")->required()->check(CLI::ExistingFile);
  classify_cmd->add_option("--features", features_path, "Feature CSV")->required()->check(CLI::ExistingFile);
  classify_cmd->add_option("--fps", fps, "Frame rate used to merge events")->check(CLI::PositiveNumber);
  classify_cmd->add_option("-o,--output", output, "Prediction CSV")->required();
  classify_cmd->add_option("--events", events_path, "Event JSONL");

  auto* eval_cmd = app.add_subcommand("evaluate", "Baseline comparison, classifier report, reject sweep and tracking metrics");
  eval_cmd->add_option("--manifest", manifest, "Corpus manifest (default: generate from config)")
      ->check(CLI::ExistingFile);

  auto* ablate_cmd = app.add_subcommand("ablate", "Feature-subset ablation");
  ablate_cmd->add_option("--manifest", manifest, "Corpus manifest")->check(CLI::ExistingFile);

  auto* sens_cmd = app.add_subcommand("sensitivity", "Proximity factor by dwell time grid");
  sens_cmd->add_option("--manifest", manifest, "Corpus manifest")->check(CLI::ExistingFile);

  auto* sweep_cmd = app.add_subcommand("sweep-match", "Tracker match-threshold sweep against identity labels");
  sweep_cmd->add_option("-i,--input", input, "Frame JSONL with identities")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--gt-every", gt_every, "Use every n-th frame as ground truth")->check(CLI::PositiveNumber);

  auto* net_cmd = app.add_subcommand("network", "Build social graphs from an event file");
  net_cmd->add_option("--events", events_path, "Event JSONL")->required()->check(CLI::ExistingFile);
  net_cmd->add_option("--fps", fps, "Frame rate used to merge events")->check(CLI::PositiveNumber);

  auto* pipe_cmd = app.add_subcommand("pipeline", "Run track through network over frame files");
  pipe_cmd->add_option("--model", model_path, "Model JSON")->required()->check(CLI::ExistingFile);
  auto* pipe_src = pipe_cmd->add_option_group("source");
  pipe_src->add_option("--manifest", manifest, "Corpus manifest")->check(CLI::ExistingFile);
  pipe_src->add_option("-i,--input", inputs, "Frame JSONL files")->check(CLI::ExistingFile);
  pipe_src->require_option(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (g.check) return run_check(g);
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return kUsage;
    }
    const Config cfg = resolve_config(g);
    const fs::path out = g.out_dir;

    if (*config_cmd) {
      std::cout << config_to_json(cfg).dump(2) << "\n";
    } else if (*synth_cmd) {
      if (!tmpl.empty()) {
        synth::ScenarioSpec spec;
        spec.tmpl = synth::parse_template(tmpl);
        spec.duration_s = duration;
        spec.fps = cfg.synth.fps;
        spec.noise_sigma = noise >= 0.0 ? noise : cfg.synth.noise_sigma;
        spec.occlusion_rate = cfg.synth.occlusion_rate;
        spec.seed = cfg.seed;
        spec.source_id = tmpl;
        const auto clip = synth::generate(spec);
        const fs::path path = output.empty() ? out / (tmpl + ".jsonl") : fs::path(output);
        io::write_frames(path, clip.meta, clip.frames);
        note("wrote " + path.string());
      } else {
        Config c = cfg;
        if (noise >= 0.0) c.synth.noise_sigma = noise;
        const auto entries = synth::corpus(c.synth);
        write_corpus(out, entries, c.workers);
        note("wrote " + std::to_string(entries.size()) + " clips and " + (out / "manifest.json").string());
      }
    } else if (*track_cmd) {
      const auto [meta, frames] = io::read_frames(input);
      io::write_tracks(output, meta, track_stream(frames, cfg.tracker, meta));
    } else if (*stab_cmd) {
      const auto [meta, tracks] = io::read_tracks(input);
      io::write_poses(output, meta, stabilize_all(tracks, cfg.smoother));
    } else if (*gate_cmd) {
      const auto [meta, poses] = io::read_poses(input);
      io::write_windows(output, meta, window_records(windows(poses, cfg.gate, meta)));
    } else if (*feat_cmd) {
      const auto [meta, poses] = io::read_poses(input);
      std::size_t skipped = 0;
      const auto rows = feature_rows(meta, windows(poses, cfg.gate, meta), cfg.features, &skipped);
      io::write_features(output, rows);
      note(std::to_string(rows.size()) + " rows, " + std::to_string(skipped) + " windows skipped");
    } else if (*train_cmd) {
      std::vector<io::FeatureRow> rows;
      if (!manifest.empty()) {
        rows = training_rows(prepare_corpus(corpus_entries(manifest), cfg), cfg);
      } else {
        rows = io::read_features(features_path);
      }
      const auto clips = labeled_clips(rows);
      const SvmModel model = train(clips, cfg.svm, feature_columns(FeatureSet::Full));
      io::save_model(output, model);
      note("trained on " + std::to_string(clips.size()) + " labeled rows");
    } else if (*classify_cmd) {
      const SvmModel model = io::load_model(model_path);
      const auto rows = io::read_features(features_path);
      std::vector<Prediction> preds;
      std::vector<std::vector<std::string>> table;
      for (const auto& r : rows) {
        preds.push_back(model.predict(project(r.features, feature_columns(FeatureSet::Full))));
        table.push_back({r.source_id, std::to_string(r.track_a), std::to_string(r.track_b), r.identity_a,
                         r.identity_b, std::to_string(r.span.start), std::to_string(r.span.end),
                         std::string(label_name(preds.back().label)), io::format_double(preds.back().confidence)});
      }
      io::write_atomic(output, io::to_csv({"source_id", "track_a", "track_b", "identity_a", "identity_b",
                                           "start_frame", "end_frame", "predicted", "confidence"},
                                          table));
      if (!events_path.empty()) {
        io::write_events(events_path, merge_events(events_from(rows, preds), fps, cfg.network.merge_gap_s));
      }
    } else if (*eval_cmd) {
      const auto entries = entries_for(manifest, cfg);
      const auto clips = prepare_corpus(entries, cfg);
      const BaselineComparison cmp = compare_baseline(clips, cfg);
      io::write_atomic(out / "comparison.csv", comparison_csv(cmp));
      io::write_atomic(out / "reject_sweep.csv",
                       reject_csv(reject_sweep(cmp, {0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7})));
      io::write_atomic(out / "classification.csv", classification_csv(classification_report(clips, cfg).report));
      std::vector<StreamInput> streams;
      if (manifest.empty()) {
        for (const auto& e : entries) {
          auto clip = synth::generate(e.spec);
          streams.push_back({clip.meta, std::move(clip.frames)});
        }
      } else {
        streams = read_streams(manifest);
      }
      io::write_atomic(out / "mot.csv", mot_csv(pooled_mot(streams, cfg)));
      std::cout << comparison_csv(cmp);
    } else if (*ablate_cmd) {
      const auto rows = ablate(prepare_corpus(entries_for(manifest, cfg), cfg), cfg);
      io::write_atomic(out / "ablation.csv", ablation_csv(rows));
      std::cout << ablation_csv(rows);
    } else if (*sens_cmd) {
      const auto cells = sensitivity(prepare_corpus(entries_for(manifest, cfg), cfg), cfg);
      io::write_atomic(out / "sensitivity.csv", sensitivity_csv(cells));
      std::cout << sensitivity_csv(cells);
    } else if (*sweep_cmd) {
      const auto [meta, frames] = io::read_frames(input);
      const auto rows = match_threshold_sweep(ground_truth_from_identities(frames, gt_every), frames, meta,
                                              cfg.tracker, cfg.eval.match_thresholds, cfg.eval.mot_iou_gate,
                                              cfg.workers);
      io::write_atomic(out / "sweep.csv", sweep_csv(rows));
      std::cout << sweep_csv(rows);
    } else if (*net_cmd) {
      const NetworkOutput net =
          build_network(merge_events(io::read_events(events_path), fps, cfg.network.merge_gap_s), cfg.network);
      std::cout << write_network(out, net).dump(2) << "\n";
    } else if (*pipe_cmd) {
      std::vector<StreamInput> streams;
      if (!manifest.empty()) {
        streams = read_streams(manifest);
      } else {
        for (const auto& p : inputs) {
          auto [meta, frames] = io::read_frames(p);
          streams.push_back({meta, std::move(frames)});
        }
      }
      const PipelineResult result = run_pipeline(streams, cfg, io::load_model(model_path));
      write_pipeline_outputs(out, result, cfg);
      note(std::to_string(result.network.events.size()) + " events from " + std::to_string(streams.size()) +
           " streams");
    }
    return kOk;
  } catch (const Error& e) {
    note(e.code() + ": " + e.what());
    return exit_code(e);
  } catch (const std::exception& e) {
    note(e.what());
    return kData;
  }
}
