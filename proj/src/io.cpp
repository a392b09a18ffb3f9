#include "herdgraph/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "herdgraph/error.hpp"

namespace herdgraph::io {

namespace {

[[noreturn]] void parse_fail(const std::string& where, std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::Parse, "ParseError", where + ":" + std::to_string(line) + ": " + msg);
}

[[noreturn]] void schema_fail(const std::string& where, std::size_t line, const std::string& field,
                              const std::string& msg) {
  const std::string loc = line > 0 ? where + ":" + std::to_string(line) : where;
  throw Error(ErrorKind::Schema, "SchemaError", loc + ": field '" + field + "': " + msg);
}

// Field accessors that report the offending field on a type or presence error.
struct Ctx {
  std::string where;
  std::size_t line = 0;

  const Json& at(const Json& j, const std::string& key) const {
    if (!j.is_object()) schema_fail(where, line, key, "enclosing value is not an object");
    auto it = j.find(key);
    if (it == j.end()) schema_fail(where, line, key, "missing");
    return *it;
  }
  double num(const Json& j, const std::string& key) const {
    const Json& v = at(j, key);
    if (!v.is_number()) schema_fail(where, line, key, "expected a number");
    return v.get<double>();
  }
  std::int64_t integer(const Json& j, const std::string& key) const {
    const Json& v = at(j, key);
    if (!v.is_number_integer()) schema_fail(where, line, key, "expected an integer");
    return v.get<std::int64_t>();
  }
  std::string str(const Json& j, const std::string& key) const {
    const Json& v = at(j, key);
    if (!v.is_string()) schema_fail(where, line, key, "expected a string");
    return v.get<std::string>();
  }
  std::optional<std::string> opt_str(const Json& j, const std::string& key) const {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) schema_fail(where, line, key, "expected a string or null");
    return it->get<std::string>();
  }
  const Json& arr(const Json& j, const std::string& key, std::optional<std::size_t> size = {}) const {
    const Json& v = at(j, key);
    if (!v.is_array()) schema_fail(where, line, key, "expected an array");
    if (size && v.size() != *size) {
      schema_fail(where, line, key, "expected " + std::to_string(*size) + " entries, got " + std::to_string(v.size()));
    }
    return v;
  }
  std::vector<double> nums(const Json& j, const std::string& key, std::optional<std::size_t> size = {}) const {
    std::vector<double> out;
    for (const Json& v : arr(j, key, size)) {
      if (!v.is_number()) schema_fail(where, line, key, "expected numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  void version(const Json& header, std::string_view kind) const {
    const std::string fmt = str(header, "format");
    if (fmt != kFormatVersion) schema_fail(where, line, "format", "unsupported version '" + fmt + "'");
    const std::string k = str(header, "kind");
    if (k != kind) schema_fail(where, line, "kind", "expected '" + std::string(kind) + "', got '" + k + "'");
  }
};

Json parse_line(const std::string& text, const std::string& where, std::size_t line) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_fail(where, line, e.what());
  }
}

Json header(std::string_view kind, const StreamMeta& meta) {
  Json h;
  h["format"] = kFormatVersion;
  h["kind"] = kind;
  const Json m = meta_to_json(meta);
  for (auto& [k, v] : m.items()) h[k] = v;
  return h;
}

Json box_json(const BBox& b) { return Json::array({b.x1, b.y1, b.x2, b.y2}); }

BBox box_from(const Ctx& c, const Json& j, const std::string& key) {
  const auto v = c.nums(j, key, 4);
  BBox b{v[0], v[1], v[2], v[3]};
  if (!b.valid()) schema_fail(c.where, c.line, key, "box must satisfy x1 <= x2 and y1 <= y2");
  return b;
}

Json skeleton_json(const std::optional<Skeleton>& s) {
  if (!s) return nullptr;
  Json arr = Json::array();
  for (const Keypoint& k : s->points) {
    arr.push_back(Json::array({k.x, k.y, static_cast<int>(k.visibility), k.confidence}));
  }
  return arr;
}

std::optional<Skeleton> skeleton_from(const Ctx& c, const Json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_array()) schema_fail(c.where, c.line, key, "expected an array");
  if (it->size() != kNumKeypoints) {
    schema_fail(c.where, c.line, key, "expected " + std::to_string(kNumKeypoints) + " keypoints, got " +
                                          std::to_string(it->size()));
  }
  Skeleton s;
  for (std::size_t i = 0; i < kNumKeypoints; ++i) {
    const Json& p = (*it)[i];
    const std::string f = key + "[" + std::to_string(i) + "]";
    if (!p.is_array() || p.size() != 4 || !p[0].is_number() || !p[1].is_number() || !p[2].is_number_integer() ||
        !p[3].is_number()) {
      schema_fail(c.where, c.line, f, "expected [x, y, visibility, confidence]");
    }
    const int vis = p[2].get<int>();
    if (vis < 0 || vis > 2) schema_fail(c.where, c.line, f, "visibility must be 0, 1 or 2");
    const double conf = p[3].get<double>();
    if (!(conf >= 0.0 && conf <= 1.0)) schema_fail(c.where, c.line, f, "confidence outside [0, 1]");
    s.points[i] = {p[0].get<double>(), p[1].get<double>(), static_cast<Visibility>(vis), conf};
  }
  return s;
}

Json detection_json(const Detection& d) {
  Json j;
  j["bbox"] = box_json(d.bbox);
  j["confidence"] = d.confidence;
  j["identity"] = d.identity ? Json(*d.identity) : Json(nullptr);
  j["keypoints"] = skeleton_json(d.skeleton);
  return j;
}

Detection detection_from(const Ctx& c, const Json& j) {
  Detection d;
  d.bbox = box_from(c, j, "bbox");
  d.confidence = c.num(j, "confidence");
  if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) schema_fail(c.where, c.line, "confidence", "outside [0, 1]");
  d.identity = c.opt_str(j, "identity");
  d.skeleton = skeleton_from(c, j, "keypoints");
  return d;
}

class LineReader {
 public:
  explicit LineReader(const fs::path& path) : in_(path), where_(path.string()) {
    if (!in_) throw data_error("FileNotFound", "cannot open " + where_);
  }
  bool next(std::string& out) {
    while (std::getline(in_, out)) {
      ++line_;
      if (!out.empty() && out.back() == '\r') out.pop_back();
      if (!out.empty()) return true;
    }
    return false;
  }
  std::size_t line() const { return line_; }
  const std::string& where() const { return where_; }
  Ctx ctx() const { return {where_, line_}; }

 private:
  std::ifstream in_;
  std::string where_;
  std::size_t line_ = 0;
};

Json read_header(LineReader& r, std::string_view kind) {
  std::string text;
  if (!r.next(text)) parse_fail(r.where(), 1, "missing header line");
  Json h = parse_line(text, r.where(), r.line());
  r.ctx().version(h, kind);
  return h;
}

std::string dump_line(const Json& j) { return j.dump() + "\n"; }

}  // namespace

// ------------------------------------------------------------------ basics

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::Parse, "ParseError", "invalid number '" + std::string(s) + "' in " + std::string(what));
  }
  return v;
}

void write_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("WriteFailed", "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw data_error("WriteFailed", "short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("FileNotFound", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json meta_to_json(const StreamMeta& meta) {
  Json j;
  j["source_id"] = meta.source_id;
  j["fps"] = meta.fps;
  j["image_width"] = meta.image_width;
  j["image_height"] = meta.image_height;
  return j;
}

StreamMeta meta_from_json(const Json& j) {
  Ctx c{"stream metadata", 0};
  StreamMeta m;
  m.source_id = c.str(j, "source_id");
  m.fps = c.num(j, "fps");
  m.image_width = static_cast<int>(c.integer(j, "image_width"));
  m.image_height = static_cast<int>(c.integer(j, "image_height"));
  if (!m.valid()) schema_fail(c.where, 0, "fps", "fps and image size must be positive");
  return m;
}

// ------------------------------------------------------------------ frames

std::string frames_to_jsonl(const StreamMeta& meta, const std::vector<FrameRecord>& frames) {
  std::string out = dump_line(header("frames", meta));
  for (const FrameRecord& f : frames) {
    Json j;
    j["frame_index"] = f.frame_index;
    j["timestamp_s"] = f.timestamp_s;
    Json dets = Json::array();
    for (const Detection& d : f.detections) dets.push_back(detection_json(d));
    j["detections"] = std::move(dets);
    out += dump_line(j);
  }
  return out;
}

void write_frames(const fs::path& path, const StreamMeta& meta, const std::vector<FrameRecord>& frames) {
  write_atomic(path, frames_to_jsonl(meta, frames));
}

FrameReader::FrameReader(const fs::path& path) : in_(path), name_(path.string()) {
  if (!in_) throw data_error("FileNotFound", "cannot open " + name_);
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    if (!text.empty()) break;
  }
  if (text.empty()) parse_fail(name_, 1, "missing header line");
  const Json h = parse_line(text, name_, line_);
  Ctx c{name_, line_};
  c.version(h, "frames");
  try {
    meta_ = meta_from_json(h);
  } catch (const Error& e) {
    schema_fail(name_, line_, "header", e.what());
  }
}

std::optional<FrameRecord> FrameReader::next() {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    const Json j = parse_line(text, name_, line_);
    Ctx c{name_, line_};
    FrameRecord f;
    f.frame_index = c.integer(j, "frame_index");
    f.timestamp_s = c.num(j, "timestamp_s");
    if (last_frame_ && f.frame_index <= *last_frame_) {
      schema_fail(name_, line_, "frame_index", "must increase strictly (previous " + std::to_string(*last_frame_) + ")");
    }
    last_frame_ = f.frame_index;
    for (const Json& d : c.arr(j, "detections")) f.detections.push_back(detection_from(c, d));
    return f;
  }
  return std::nullopt;
}

std::pair<StreamMeta, std::vector<FrameRecord>> read_frames(const fs::path& path) {
  FrameReader r(path);
  std::vector<FrameRecord> frames;
  while (auto f = r.next()) frames.push_back(std::move(*f));
  return {r.meta(), std::move(frames)};
}

// ------------------------------------------------------------------ tracks

std::string tracks_to_jsonl(const StreamMeta& meta, const std::vector<Track>& tracks) {
  Json h = header("tracks", meta);
  Json summary = Json::array();
  std::map<std::int64_t, std::vector<std::pair<const Track*, const TrackSample*>>> by_frame;
  for (const Track& t : tracks) {
    Json s;
    s["track_id"] = t.id;
    s["status"] = std::string(status_name(t.status));
    s["hits"] = t.hits;
    s["last_detection_frame"] = t.last_detection_frame;
    Json votes = Json::array();
    for (const auto& [label, n] : t.votes.tallies()) votes.push_back(Json::array({label, n}));
    s["identity_votes"] = std::move(votes);
    summary.push_back(std::move(s));
    for (const TrackSample& smp : t.history) by_frame[smp.frame_index].emplace_back(&t, &smp);
  }
  h["tracks"] = std::move(summary);
  std::string out = dump_line(h);
  for (const auto& [frame, entries] : by_frame) {
    Json j;
    j["frame_index"] = frame;
    Json arr = Json::array();
    for (const auto& [t, smp] : entries) {
      Json e;
      e["track_id"] = t->id;
      e["identity"] = identity_of(*t) ? Json(*identity_of(*t)) : Json(nullptr);
      e["bbox"] = box_json(smp->box);
      e["confidence"] = smp->confidence;
      e["keypoints"] = skeleton_json(smp->skeleton);
      arr.push_back(std::move(e));
    }
    j["tracks"] = std::move(arr);
    out += dump_line(j);
  }
  return out;
}

void write_tracks(const fs::path& path, const StreamMeta& meta, const std::vector<Track>& tracks) {
  write_atomic(path, tracks_to_jsonl(meta, tracks));
}

std::pair<StreamMeta, std::vector<Track>> read_tracks(const fs::path& path) {
  LineReader r(path);
  const Json h = read_header(r, "tracks");
  const Ctx hc = r.ctx();
  const StreamMeta meta = meta_from_json(h);
  std::vector<Track> tracks;
  std::map<TrackId, std::size_t> index;
  for (const Json& s : hc.arr(h, "tracks")) {
    Track t;
    t.id = hc.integer(s, "track_id");
    const std::string status = hc.str(s, "status");
    bool known = false;
    for (TrackStatus st : {TrackStatus::Tentative, TrackStatus::Confirmed, TrackStatus::Lost, TrackStatus::Removed}) {
      if (status == status_name(st)) {
        t.status = st;
        known = true;
      }
    }
    if (!known) schema_fail(hc.where, hc.line, "status", "unknown track status '" + status + "'");
    t.hits = static_cast<int>(hc.integer(s, "hits"));
    t.last_detection_frame = hc.integer(s, "last_detection_frame");
    for (const Json& v : hc.arr(s, "identity_votes")) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_number_integer()) {
        schema_fail(hc.where, hc.line, "identity_votes", "expected [label, count] pairs");
      }
      for (int k = 0; k < v[1].get<int>(); ++k) t.votes.add(v[0].get<std::string>());
    }
    if (index.count(t.id)) schema_fail(hc.where, hc.line, "track_id", "duplicate id " + std::to_string(t.id));
    index[t.id] = tracks.size();
    tracks.push_back(std::move(t));
  }
  std::string text;
  std::optional<std::int64_t> last;
  while (r.next(text)) {
    const Json j = parse_line(text, r.where(), r.line());
    const Ctx c = r.ctx();
    const std::int64_t frame = c.integer(j, "frame_index");
    if (last && frame <= *last) schema_fail(c.where, c.line, "frame_index", "must increase strictly");
    last = frame;
    for (const Json& e : c.arr(j, "tracks")) {
      const TrackId id = c.integer(e, "track_id");
      auto it = index.find(id);
      if (it == index.end()) schema_fail(c.where, c.line, "track_id", "not declared in header: " + std::to_string(id));
      TrackSample smp;
      smp.frame_index = frame;
      smp.box = box_from(c, e, "bbox");
      smp.confidence = c.num(e, "confidence");
      smp.skeleton = skeleton_from(c, e, "keypoints");
      tracks[it->second].history.push_back(std::move(smp));
    }
  }
  return {meta, std::move(tracks)};
}

// ------------------------------------------------------------------ poses

void write_poses(const fs::path& path, const StreamMeta& meta, const std::vector<PoseTrack>& poses) {
  Json h = header("poses", meta);
  std::string out = dump_line(h);
  for (const PoseTrack& p : poses) {
    for (const PoseFrame& f : p.frames) {
      Json j;
      j["track_id"] = p.track_id;
      j["identity"] = p.identity ? Json(*p.identity) : Json(nullptr);
      j["frame_index"] = f.frame_index;
      j["bbox"] = box_json(f.box);
      j["x"] = f.x;
      j["y"] = f.y;
      Json present = Json::array();
      for (auto v : f.present) present.push_back(static_cast<int>(v));
      j["present"] = std::move(present);
      out += dump_line(j);
    }
  }
  write_atomic(path, out);
}

std::pair<StreamMeta, std::vector<PoseTrack>> read_poses(const fs::path& path) {
  LineReader r(path);
  const Json h = read_header(r, "poses");
  const StreamMeta meta = meta_from_json(h);
  std::vector<PoseTrack> poses;
  std::map<TrackId, std::size_t> index;
  std::string text;
  while (r.next(text)) {
    const Json j = parse_line(text, r.where(), r.line());
    const Ctx c = r.ctx();
    const TrackId id = c.integer(j, "track_id");
    auto [it, fresh] = index.try_emplace(id, poses.size());
    if (fresh) {
      poses.push_back({});
      poses.back().track_id = id;
      poses.back().identity = c.opt_str(j, "identity");
    }
    PoseTrack& p = poses[it->second];
    PoseFrame f;
    f.frame_index = c.integer(j, "frame_index");
    if (!p.frames.empty() && f.frame_index <= p.frames.back().frame_index) {
      schema_fail(c.where, c.line, "frame_index", "must increase strictly within a track");
    }
    f.box = box_from(c, j, "bbox");
    const auto xs = c.nums(j, "x", kNumKeypoints);
    const auto ys = c.nums(j, "y", kNumKeypoints);
    const auto ps = c.nums(j, "present", kNumKeypoints);
    for (std::size_t k = 0; k < kNumKeypoints; ++k) {
      f.x[k] = xs[k];
      f.y[k] = ys[k];
      if (ps[k] != 0.0 && ps[k] != 1.0) schema_fail(c.where, c.line, "present", "entries must be 0 or 1");
      f.present[k] = static_cast<std::uint8_t>(ps[k]);
    }
    p.frames.push_back(f);
  }
  return {meta, std::move(poses)};
}

// ------------------------------------------------------------------ windows

WindowRecord window_record(const DyadWindow& w) {
  return {w.track_a, w.track_b, w.identity_a, w.identity_b, w.span, w.coverage()};
}

void write_windows(const fs::path& path, const StreamMeta& meta, const std::vector<WindowRecord>& windows) {
  std::string out = dump_line(header("windows", meta));
  for (const WindowRecord& w : windows) {
    Json j;
    j["track_a"] = w.track_a;
    j["track_b"] = w.track_b;
    j["identity_a"] = w.identity_a ? Json(*w.identity_a) : Json(nullptr);
    j["identity_b"] = w.identity_b ? Json(*w.identity_b) : Json(nullptr);
    j["start_frame"] = w.span.start;
    j["end_frame"] = w.span.end;
    j["coverage"] = w.coverage;
    out += dump_line(j);
  }
  write_atomic(path, out);
}

std::pair<StreamMeta, std::vector<WindowRecord>> read_windows(const fs::path& path) {
  LineReader r(path);
  const Json h = read_header(r, "windows");
  const StreamMeta meta = meta_from_json(h);
  std::vector<WindowRecord> out;
  std::string text;
  while (r.next(text)) {
    const Json j = parse_line(text, r.where(), r.line());
    const Ctx c = r.ctx();
    WindowRecord w;
    w.track_a = c.integer(j, "track_a");
    w.track_b = c.integer(j, "track_b");
    w.identity_a = c.opt_str(j, "identity_a");
    w.identity_b = c.opt_str(j, "identity_b");
    w.span = {c.integer(j, "start_frame"), c.integer(j, "end_frame")};
    w.coverage = c.num(j, "coverage");
    if (w.span.end < w.span.start) schema_fail(c.where, c.line, "end_frame", "precedes start_frame");
    out.push_back(std::move(w));
  }
  return {meta, std::move(out)};
}

// ------------------------------------------------------------------ tables

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::vector<std::string> csv_split(std::string_view line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        out.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.emplace_back();
    } else {
      out.back() += ch;
    }
  }
  if (quoted) throw Error(ErrorKind::Parse, "ParseError", "unterminated quoted CSV field");
  return out;
}

std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  auto line = [](const std::vector<std::string>& fields) {
    std::string s;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) s += ',';
      s += csv_escape(fields[i]);
    }
    return s + "\n";
  };
  std::string out = line(header);
  for (const auto& r : rows) out += line(r);
  return out;
}

void write_json(const fs::path& path, const Json& j) { write_atomic(path, j.dump(2) + "\n"); }

Json read_json(const fs::path& path) {
  const std::string text = read_text(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, "ParseError", path.string() + ": " + e.what());
  }
}

// ------------------------------------------------------------------ features

std::vector<std::string> feature_csv_header() {
  std::vector<std::string> h = {"source_id",  "track_a",   "track_b", "identity_a",
                                "identity_b", "start_frame", "end_frame", "label"};
  for (auto n : feature_names()) h.emplace_back(n);
  return h;
}

std::string features_to_csv(const std::vector<FeatureRow>& rows) {
  std::vector<std::vector<std::string>> body;
  for (const FeatureRow& r : rows) {
    std::vector<std::string> f = {r.source_id,
                                  std::to_string(r.track_a),
                                  std::to_string(r.track_b),
                                  r.identity_a,
                                  r.identity_b,
                                  std::to_string(r.span.start),
                                  std::to_string(r.span.end),
                                  r.label ? std::string(label_name(*r.label)) : std::string()};
    for (double v : r.features) f.push_back(format_double(v));
    body.push_back(std::move(f));
  }
  return to_csv(feature_csv_header(), body);
}

void write_features(const fs::path& path, const std::vector<FeatureRow>& rows) {
  write_atomic(path, features_to_csv(rows));
}

std::vector<FeatureRow> read_features(const fs::path& path) {
  LineReader r(path);
  std::string text;
  if (!r.next(text)) parse_fail(r.where(), 1, "missing CSV header");
  const auto expected = feature_csv_header();
  if (csv_split(text) != expected) schema_fail(r.where(), r.line(), "header", "does not match the feature CSV layout");
  std::vector<FeatureRow> rows;
  while (r.next(text)) {
    std::vector<std::string> f;
    try {
      f = csv_split(text);
    } catch (const Error& e) {
      parse_fail(r.where(), r.line(), e.what());
    }
    if (f.size() != expected.size()) {
      parse_fail(r.where(), r.line(), "expected " + std::to_string(expected.size()) + " fields, got " +
                                          std::to_string(f.size()));
    }
    auto integer = [&](std::size_t i) {
      std::int64_t v = 0;
      auto res = std::from_chars(f[i].data(), f[i].data() + f[i].size(), v);
      if (res.ec != std::errc() || res.ptr != f[i].data() + f[i].size()) {
        schema_fail(r.where(), r.line(), expected[i], "expected an integer");
      }
      return v;
    };
    FeatureRow row;
    row.source_id = f[0];
    row.track_a = integer(1);
    row.track_b = integer(2);
    row.identity_a = f[3];
    row.identity_b = f[4];
    row.span = {integer(5), integer(6)};
    if (!f[7].empty()) {
      try {
        row.label = parse_label(f[7]);
      } catch (const Error& e) {
        schema_fail(r.where(), r.line(), "label", e.what());
      }
    }
    for (std::size_t k = 0; k < kFeatureDim; ++k) {
      try {
        row.features[k] = parse_double(f[8 + k], expected[8 + k]);
      } catch (const Error& e) {
        parse_fail(r.where(), r.line(), e.what());
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ------------------------------------------------------------------ model

Json model_to_json(const SvmModel& m) {
  Json j;
  j["format"] = kFormatVersion;
  j["kind"] = "svm_model";
  j["input_dim"] = m.input_dim;
  j["gamma"] = m.gamma;
  j["C"] = m.C;
  j["reject_threshold"] = m.reject_threshold;
  Json classes = Json::array();
  for (Label l : m.classes) classes.push_back(std::string(label_name(l)));
  j["classes"] = std::move(classes);
  j["class_weights"] = m.class_weights;
  j["scaler"] = {{"mean", m.scaler.mean}, {"scale", m.scaler.scale}, {"active", m.scaler.active}};
  Json machines = Json::array();
  const std::size_t dim = m.scaler.active.size();
  for (const BinaryMachine& b : m.machines) {
    Json mj;
    mj["positive"] = std::string(label_name(b.positive));
    mj["negative"] = std::string(label_name(b.negative));
    mj["bias"] = b.bias;
    mj["coef"] = b.coef;
    Json svs = Json::array();
    for (std::size_t i = 0; i < b.coef.size(); ++i) {
      svs.push_back(std::vector<double>(b.support_vectors.begin() + static_cast<std::ptrdiff_t>(i * dim),
                                        b.support_vectors.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim)));
    }
    mj["support_vectors"] = std::move(svs);
    machines.push_back(std::move(mj));
  }
  j["machines"] = std::move(machines);
  return j;
}

SvmModel model_from_json(const Json& j) {
  Ctx c{"model", 0};
  c.version(j, "svm_model");
  SvmModel m;
  m.input_dim = static_cast<std::size_t>(c.integer(j, "input_dim"));
  m.gamma = c.num(j, "gamma");
  m.C = c.num(j, "C");
  m.reject_threshold = c.num(j, "reject_threshold");
  auto label = [&](const Json& v, const std::string& key) {
    if (!v.is_string()) schema_fail(c.where, 0, key, "expected a label name");
    try {
      return parse_label(v.get<std::string>());
    } catch (const Error& e) {
      schema_fail(c.where, 0, key, e.what());
    }
  };
  for (const Json& v : c.arr(j, "classes")) m.classes.push_back(label(v, "classes"));
  m.class_weights = c.nums(j, "class_weights", m.classes.size());
  const Json& s = c.at(j, "scaler");
  m.scaler.mean = c.nums(s, "mean", m.input_dim);
  m.scaler.scale = c.nums(s, "scale", m.input_dim);
  for (const Json& v : c.arr(s, "active")) {
    if (!v.is_number_unsigned() || v.get<std::size_t>() >= m.input_dim) {
      schema_fail(c.where, 0, "scaler.active", "expected indices below input_dim");
    }
    m.scaler.active.push_back(v.get<std::size_t>());
  }
  const std::size_t dim = m.scaler.active.size();
  const std::size_t k = m.classes.size();
  const Json& machines = c.arr(j, "machines", k * (k - (k > 0 ? 1 : 0)) / 2);
  for (const Json& mj : machines) {
    BinaryMachine b;
    b.positive = label(c.at(mj, "positive"), "machines.positive");
    b.negative = label(c.at(mj, "negative"), "machines.negative");
    b.bias = c.num(mj, "bias");
    b.coef = c.nums(mj, "coef");
    const Json& svs = c.arr(mj, "support_vectors", b.coef.size());
    for (const Json& sv : svs) {
      if (!sv.is_array() || sv.size() != dim) schema_fail(c.where, 0, "machines.support_vectors", "row width mismatch");
      for (const Json& v : sv) b.support_vectors.push_back(v.get<double>());
    }
    m.machines.push_back(std::move(b));
  }
  return m;
}

void save_model(const fs::path& path, const SvmModel& m) { write_json(path, model_to_json(m)); }

SvmModel load_model(const fs::path& path) {
  try {
    return model_from_json(read_json(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Schema) throw Error(ErrorKind::Schema, e.code(), path.string() + ": " + e.what());
    throw;
  }
}

// ------------------------------------------------------------------ events

void write_events(const fs::path& path, const std::vector<InteractionEvent>& events) {
  Json h;
  h["format"] = kFormatVersion;
  h["kind"] = "events";
  std::string out = dump_line(h);
  for (const InteractionEvent& e : events) {
    Json j;
    j["source_id"] = e.source_id;
    j["identity_a"] = e.identity_a;
    j["identity_b"] = e.identity_b;
    j["label"] = std::string(label_name(e.label));
    j["start_frame"] = e.span.start;
    j["end_frame"] = e.span.end;
    j["confidence"] = e.confidence;
    out += dump_line(j);
  }
  write_atomic(path, out);
}

std::vector<InteractionEvent> read_events(const fs::path& path) {
  LineReader r(path);
  read_header(r, "events");
  std::vector<InteractionEvent> out;
  std::string text;
  while (r.next(text)) {
    const Json j = parse_line(text, r.where(), r.line());
    const Ctx c = r.ctx();
    Label label{};
    try {
      label = parse_label(c.str(j, "label"));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Schema) throw;
      schema_fail(c.where, c.line, "label", e.what());
    }
    out.push_back(make_event(c.str(j, "source_id"), c.str(j, "identity_a"), c.str(j, "identity_b"), label,
                             {c.integer(j, "start_frame"), c.integer(j, "end_frame")}, c.num(j, "confidence")));
  }
  return out;
}

// ------------------------------------------------------------------ graphs

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string xml_unescape(const std::string& s) {
  static const std::vector<std::pair<std::string, char>> kEntities = {
      {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}, {"&amp;", '&'}};
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    bool hit = false;
    if (s[i] == '&') {
      for (const auto& [ent, ch] : kEntities) {
        if (s.compare(i, ent.size(), ent) == 0) {
          out += ch;
          i += ent.size();
          hit = true;
          break;
        }
      }
    }
    if (!hit) out += s[i++];
  }
  return out;
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string graph_to_graphml(const SocialGraph& g) {
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
    << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
    << "  <key id=\"count\" for=\"edge\" attr.name=\"count\" attr.type=\"int\"/>\n"
    << "  <key id=\"confidence_sum\" for=\"edge\" attr.name=\"confidence_sum\" attr.type=\"double\"/>\n"
    << "  <key id=\"layer\" for=\"graph\" attr.name=\"layer\" attr.type=\"string\"/>\n"
    << "  <key id=\"weight_mode\" for=\"graph\" attr.name=\"weight_mode\" attr.type=\"string\"/>\n"
    << "  <key id=\"format\" for=\"graph\" attr.name=\"format\" attr.type=\"string\"/>\n"
    << "  <graph id=\"" << layer_name(g.layer) << "\" edgedefault=\"undirected\">\n"
    << "    <data key=\"format\">" << kFormatVersion << "</data>\n"
    << "    <data key=\"layer\">" << layer_name(g.layer) << "</data>\n"
    << "    <data key=\"weight_mode\">" << weight_mode_name(g.mode) << "</data>\n";
  for (const auto& n : g.nodes) o << "    <node id=\"" << xml_escape(n) << "\"/>\n";
  for (const auto& e : g.edges) {
    o << "    <edge source=\"" << xml_escape(e.a) << "\" target=\"" << xml_escape(e.b) << "\">"
      << "<data key=\"weight\">" << format_double(e.weight) << "</data>"
      << "<data key=\"count\">" << e.count << "</data>"
      << "<data key=\"confidence_sum\">" << format_double(e.confidence_sum) << "</data></edge>\n";
  }
  o << "  </graph>\n</graphml>\n";
  return o.str();
}

std::string graph_to_dot(const SocialGraph& g) {
  std::ostringstream o;
  o << "graph " << dot_quote(layer_name(g.layer)) << " {\n";
  o << "  // " << kFormatVersion << " weight_mode=" << weight_mode_name(g.mode) << "\n";
  for (const auto& n : g.nodes) o << "  " << dot_quote(n) << ";\n";
  for (const auto& e : g.edges) {
    o << "  " << dot_quote(e.a) << " -- " << dot_quote(e.b) << " [weight=" << format_double(e.weight)
      << ", count=" << e.count << ", confidence_sum=" << format_double(e.confidence_sum) << "];\n";
  }
  o << "}\n";
  return o.str();
}

SocialGraph graph_from_graphml(const std::string& text) {
  auto data = [&](const std::string& key) -> std::optional<std::string> {
    std::smatch m;
    const std::regex re("<data key=\"" + key + "\">([^<]*)</data>");
    if (std::regex_search(text, m, re)) return xml_unescape(m[1]);
    return std::nullopt;
  };
  const auto fmt = data("format");
  if (!fmt || *fmt != kFormatVersion) {
    schema_fail("graphml", 0, "format", "unsupported or missing version");
  }
  SocialGraph g;
  g.layer = parse_layer(data("layer").value_or("combined"));
  g.mode = parse_weight_mode(data("weight_mode").value_or("count"));
  const std::regex node_re("<node id=\"([^\"]*)\"/>");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), node_re); it != std::sregex_iterator(); ++it) {
    g.nodes.push_back(xml_unescape((*it)[1]));
  }
  const std::regex edge_re(
      "<edge source=\"([^\"]*)\" target=\"([^\"]*)\"><data key=\"weight\">([^<]*)</data>"
      "<data key=\"count\">([^<]*)</data><data key=\"confidence_sum\">([^<]*)</data></edge>");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), edge_re); it != std::sregex_iterator(); ++it) {
    Edge e;
    e.a = xml_unescape((*it)[1]);
    e.b = xml_unescape((*it)[2]);
    e.weight = parse_double((*it)[3].str(), "edge weight");
    e.count = static_cast<int>(parse_double((*it)[4].str(), "edge count"));
    e.confidence_sum = parse_double((*it)[5].str(), "edge confidence_sum");
    g.edges.push_back(std::move(e));
  }
  return g;
}

Json metrics_to_json(const SocialGraph& g, const GraphMetrics& m) {
  Json j;
  j["format"] = kFormatVersion;
  j["layer"] = layer_name(g.layer);
  j["weight_mode"] = weight_mode_name(g.mode);
  j["node_count"] = g.nodes.size();
  j["edge_count"] = m.edge_count;
  j["density"] = m.density;
  j["total_weight"] = g.total_weight();
  Json nodes = Json::array();
  for (const NodeMetrics& n : m.nodes) {
    nodes.push_back({{"id", n.id},
                     {"degree", n.degree},
                     {"weighted_degree", n.weighted_degree},
                     {"betweenness", n.betweenness},
                     {"clustering", n.clustering}});
  }
  j["nodes"] = std::move(nodes);
  return j;
}

// ------------------------------------------------------------------ manifest

std::vector<const ManifestFile*> Manifest::with_role(std::string_view role) const {
  std::vector<const ManifestFile*> out;
  for (const auto& f : files) {
    if (f.role == role) out.push_back(&f);
  }
  return out;
}

void write_manifest(const fs::path& path, const Manifest& m) {
  Json j;
  j["format"] = m.format_version;
  j["kind"] = "manifest";
  j["stream"] = m.stream ? meta_to_json(*m.stream) : Json(nullptr);
  Json files = Json::array();
  for (const auto& f : m.files) files.push_back({{"path", f.path}, {"role", f.role}, {"attributes", f.attributes}});
  j["files"] = std::move(files);
  write_json(path, j);
}

Manifest read_manifest(const fs::path& path) {
  const Json j = read_json(path);
  Ctx c{path.string(), 0};
  c.version(j, "manifest");
  Manifest m;
  const Json& s = c.at(j, "stream");
  if (!s.is_null()) m.stream = meta_from_json(s);
  static const std::set<std::string> kRoles = {"frames", "tracks", "poses", "windows", "features", "labels",
                                               "model",  "graph",  "report", "events", "metrics"};
  for (const Json& f : c.arr(j, "files")) {
    ManifestFile mf;
    mf.path = c.str(f, "path");
    mf.role = c.str(f, "role");
    if (!kRoles.count(mf.role)) schema_fail(c.where, 0, "files.role", "unknown role '" + mf.role + "'");
    auto it = f.find("attributes");
    if (it != f.end()) mf.attributes = *it;
    const fs::path full = path.parent_path() / mf.path;
    if (!fs::exists(full)) throw data_error("MissingFile", "manifest references missing file " + full.string());
    m.files.push_back(std::move(mf));
  }
  return m;
}

}  // namespace herdgraph::io
