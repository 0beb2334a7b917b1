#include "motionsplice/geometry.h"

#include <string>

#include "motionsplice/error.h"

namespace motionsplice {
namespace {

Vec3 head_minus_neck(const MotionSequence& seq, std::size_t frame) {
  if (frame >= seq.frame_count()) {
    throw OutOfRange("frame " + std::to_string(frame) + " out of range for " +
                     std::to_string(seq.frame_count()) + " frames");
  }
  const SpecialJoints& sj = seq.skeleton().special();
  return seq.position(frame, sj.head) - seq.position(frame, sj.neck);
}

Vec3 normalized_or_throw(const Vec3& v, std::size_t frame) {
  const double n = v.norm();
  if (n < kDegenerateNorm) {
    throw DegenerateDirection("head and neck coincide at frame " + std::to_string(frame));
  }
  return v / n;
}

}  // namespace

Vec3 facing_direction(const MotionSequence& seq, std::size_t frame) {
  return normalized_or_throw(head_minus_neck(seq, frame), frame);
}

Vec3 facing_direction_horizontal(const MotionSequence& seq, std::size_t frame) {
  Vec3 d = head_minus_neck(seq, frame);
  d.y() = 0.0;
  return normalized_or_throw(d, frame);
}

Trajectory root_trajectory(const MotionSequence& seq) {
  Trajectory out(static_cast<Eigen::Index>(seq.frame_count()), 3);
  for (std::size_t f = 0; f < seq.frame_count(); ++f) {
    out.row(static_cast<Eigen::Index>(f)) = seq.root(f).transpose();
  }
  return out;
}

}  // namespace motionsplice
