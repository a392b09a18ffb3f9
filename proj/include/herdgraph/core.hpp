#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace herdgraph {

/// Axis-aligned box in image pixels (y grows downward).
struct BBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  double cx() const { return 0.5 * (x1 + x2); }
  double cy() const { return 0.5 * (y1 + y2); }

  /// Finite coordinates with x2 >= x1 and y2 >= y1.
  bool valid() const;

  static BBox from_center(double cx, double cy, double w, double h) {
    return {cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h};
  }

  friend bool operator==(const BBox&, const BBox&) = default;
};

double iou(const BBox& a, const BBox& b);
double diagonal(const BBox& b);
double center_distance(const BBox& a, const BBox& b);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

enum class Visibility : std::uint8_t { Missing = 0, Occluded = 1, Visible = 2 };

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  Visibility visibility = Visibility::Missing;
  double confidence = 0.0;

  /// Occluded points take part in geometry; missing ones never do.
  bool present() const { return visibility != Visibility::Missing; }

  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

inline constexpr std::size_t kNumKeypoints = 27;

/// Named index map of the 27-point anatomical schema.
namespace kp {
enum : std::size_t {
  Nose = 0,
  LeftEye,
  RightEye,
  LeftEar,
  RightEar,
  Poll,
  Throat,
  Withers,
  MidBack,
  Loin,
  TailHead,
  TailMid,
  TailTip,
  LeftFrontShoulder,
  LeftFrontKnee,
  LeftFrontHoof,
  RightFrontShoulder,
  RightFrontKnee,
  RightFrontHoof,
  LeftHindHip,
  LeftHindHock,
  LeftHindHoof,
  RightHindHip,
  RightHindHock,
  RightHindHoof,
  Brisket,
  Belly,
};
}  // namespace kp

/// Schema names in index order.
std::span<const std::string_view> keypoint_names();
/// Index of a schema name, or nullopt if the name is not in the schema.
std::optional<std::size_t> keypoint_index(std::string_view name);
/// Face-region subset used for the head-to-head distance (eyes, ears, nose).
std::span<const std::size_t> head_group();

struct Skeleton {
  std::array<Keypoint, kNumKeypoints> points{};

  friend bool operator==(const Skeleton&, const Skeleton&) = default;
};

struct Detection {
  BBox bbox;
  double confidence = 1.0;
  std::optional<std::string> identity;
  std::optional<Skeleton> skeleton;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct FrameRecord {
  std::int64_t frame_index = 0;
  double timestamp_s = 0.0;
  std::vector<Detection> detections;

  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

struct StreamMeta {
  double fps = 30.0;
  int image_width = 3840;
  int image_height = 2160;
  std::string source_id;

  bool valid() const { return fps > 0.0 && image_width > 0 && image_height > 0; }

  friend bool operator==(const StreamMeta&, const StreamMeta&) = default;
};

inline double timestamp_of(std::int64_t frame_index, double fps) {
  return static_cast<double>(frame_index) / fps;
}

using TrackId = std::int64_t;

/// Interaction classes plus the rejection outcome.
enum class Label : std::uint8_t {
  LickGroom = 0,
  Headbutt = 1,
  Displacement = 2,
  NoInteraction = 3,
  /// Binary outcome of the occurrence-only baseline.
  InteractionPresent = 4,
};

inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::array<Label, kNumClasses> kInteractionClasses = {
    Label::LickGroom, Label::Headbutt, Label::Displacement};

std::string_view label_name(Label label);
/// Parses names produced by label_name; throws Error(Schema) otherwise.
Label parse_label(std::string_view name);
inline bool is_affiliative(Label l) { return l == Label::LickGroom; }
inline bool is_agonistic(Label l) { return l == Label::Headbutt || l == Label::Displacement; }

}  // namespace herdgraph
