#include "motionsplice/motion.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "motionsplice/error.h"

namespace motionsplice {

MotionSequence::MotionSequence(std::shared_ptr<const Skeleton> skeleton, double fps,
                               std::vector<double> positions)
    : skeleton_(std::move(skeleton)), fps_(fps), frames_(0), positions_(std::move(positions)) {
  if (!skeleton_) {
    throw InvariantViolation("motion sequence requires a skeleton");
  }
  if (!(fps_ > 0.0) || !std::isfinite(fps_)) {
    throw InvariantViolation("fps must be positive and finite");
  }
  const std::size_t s = stride();
  if (positions_.empty() || positions_.size() % s != 0) {
    throw InvariantViolation("position count " + std::to_string(positions_.size()) +
                             " is not a positive multiple of joints*3 = " + std::to_string(s));
  }
  frames_ = positions_.size() / s;
  const auto bad = std::find_if(positions_.begin(), positions_.end(),
                                [](double v) { return !std::isfinite(v); });
  if (bad != positions_.end()) {
    const auto i = static_cast<std::size_t>(bad - positions_.begin());
    throw InvariantViolation("non-finite coordinate at frame " + std::to_string(i / s) +
                             ", joint " + std::to_string((i % s) / 3));
  }
}

MotionSequence MotionSequence::slice(std::size_t begin, std::size_t end) const {
  if (begin >= end || end > frames_) {
    throw OutOfRange("frame range [" + std::to_string(begin) + ", " + std::to_string(end) +
                     ") invalid for " + std::to_string(frames_) + " frames");
  }
  std::vector<double> out(positions_.begin() + static_cast<std::ptrdiff_t>(begin * stride()),
                          positions_.begin() + static_cast<std::ptrdiff_t>(end * stride()));
  return MotionSequence(skeleton_, fps_, std::move(out));
}

MotionSequence MotionSequence::translated(const Vec3& offset) const {
  std::vector<double> out = positions_;
  for (std::size_t i = 0; i < out.size(); i += 3) {
    out[i] += offset.x();
    out[i + 1] += offset.y();
    out[i + 2] += offset.z();
  }
  return MotionSequence(skeleton_, fps_, std::move(out));
}

bool MotionSequence::operator==(const MotionSequence& other) const {
  return fps_ == other.fps_ && *skeleton_ == *other.skeleton_ && positions_ == other.positions_;
}

MotionSequence concatenate(const MotionSequence& a, const MotionSequence& b) {
  if (!(a.skeleton() == b.skeleton()) || a.fps() != b.fps()) {
    throw ShapeMismatch("cannot concatenate sequences with different skeletons or fps");
  }
  std::vector<double> out(a.data().begin(), a.data().end());
  out.insert(out.end(), b.data().begin(), b.data().end());
  return MotionSequence(a.skeleton_ptr(), a.fps(), std::move(out));
}

double duration_seconds(const MotionSequence& seq) noexcept {
  return static_cast<double>(seq.frame_count()) / seq.fps();
}

}  // namespace motionsplice
