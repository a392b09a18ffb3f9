#include "herdgraph/core.hpp"

#include <algorithm>
#include <cmath>

#include "herdgraph/error.hpp"

namespace herdgraph {

bool BBox::valid() const {
  return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) && std::isfinite(y2) &&
         x2 >= x1 && y2 >= y1;
}

double iou(const BBox& a, const BBox& b) {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double diagonal(const BBox& b) { return std::hypot(b.width(), b.height()); }

double center_distance(const BBox& a, const BBox& b) {
  return std::hypot(b.cx() - a.cx(), b.cy() - a.cy());
}

namespace {

constexpr std::array<std::string_view, kNumKeypoints> kNames = {
    "nose",
    "left_eye",
    "right_eye",
    "left_ear",
    "right_ear",
    "poll",
    "throat",
    "withers",
    "mid_back",
    "loin",
    "tail_head",
    "tail_mid",
    "tail_tip",
    "left_front_shoulder",
    "left_front_knee",
    "left_front_hoof",
    "right_front_shoulder",
    "right_front_knee",
    "right_front_hoof",
    "left_hind_hip",
    "left_hind_hock",
    "left_hind_hoof",
    "right_hind_hip",
    "right_hind_hock",
    "right_hind_hoof",
    "brisket",
    "belly",
};

constexpr std::array<std::size_t, 5> kHead = {kp::Nose, kp::LeftEye, kp::RightEye, kp::LeftEar,
                                              kp::RightEar};

}  // namespace

std::span<const std::string_view> keypoint_names() { return kNames; }

std::optional<std::size_t> keypoint_index(std::string_view name) {
  const auto it = std::find(kNames.begin(), kNames.end(), name);
  if (it == kNames.end()) return std::nullopt;
  return static_cast<std::size_t>(it - kNames.begin());
}

std::span<const std::size_t> head_group() { return kHead; }

std::string_view label_name(Label label) {
  switch (label) {
    case Label::LickGroom:
      return "LickGroom";
    case Label::Headbutt:
      return "Headbutt";
    case Label::Displacement:
      return "Displacement";
    case Label::NoInteraction:
      return "NoInteraction";
    case Label::InteractionPresent:
      return "InteractionPresent";
  }
  return "NoInteraction";
}

Label parse_label(std::string_view name) {
  for (Label l : {Label::LickGroom, Label::Headbutt, Label::Displacement, Label::NoInteraction,
                  Label::InteractionPresent}) {
    if (label_name(l) == name) return l;
  }
  throw Error(ErrorKind::Schema, "SchemaError", "unknown label '" + std::string(name) + "'");
}

}  // namespace herdgraph
