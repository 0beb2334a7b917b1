#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "motionsplice/skeleton.h"

namespace motionsplice {

using Vec3 = Eigen::Vector3d;

inline constexpr double kDefaultFps = 20.0;

// F x J x 3 global joint positions in meters, stored row-major (frame, joint,
// axis). Immutable once constructed: every operation that edits motion returns
// a new sequence.
class MotionSequence {
 public:
  // Throws InvariantViolation unless positions.size() == F*J*3 with F >= 1,
  // fps > 0 and every coordinate finite.
  MotionSequence(std::shared_ptr<const Skeleton> skeleton, double fps,
                 std::vector<double> positions);

  const Skeleton& skeleton() const noexcept { return *skeleton_; }
  const std::shared_ptr<const Skeleton>& skeleton_ptr() const noexcept { return skeleton_; }
  double fps() const noexcept { return fps_; }
  std::size_t frame_count() const noexcept { return frames_; }
  std::size_t joint_count() const noexcept { return skeleton_->joint_count(); }

  Vec3 position(std::size_t frame, std::size_t joint) const {
    const std::size_t i = index(frame, joint);
    return {positions_[i], positions_[i + 1], positions_[i + 2]};
  }
  Vec3 root(std::size_t frame) const { return position(frame, skeleton_->special().root); }

  // All J*3 coordinates of one frame.
  std::span<const double> frame(std::size_t f) const {
    return std::span<const double>(positions_).subspan(f * stride(), stride());
  }
  std::span<const double> data() const noexcept { return positions_; }
  std::size_t stride() const noexcept { return joint_count() * 3; }

  // Frames [begin, end). Throws OutOfRange on an empty or invalid range.
  MotionSequence slice(std::size_t begin, std::size_t end) const;
  MotionSequence translated(const Vec3& offset) const;

  // Same skeleton topology and fps, bit-identical positions.
  bool operator==(const MotionSequence& other) const;

 private:
  std::size_t index(std::size_t frame, std::size_t joint) const noexcept {
    return (frame * joint_count() + joint) * 3;
  }

  std::shared_ptr<const Skeleton> skeleton_;
  double fps_;
  std::size_t frames_;
  std::vector<double> positions_;
};

// Frames [a..] followed by [b..]. Both must share skeleton and fps.
MotionSequence concatenate(const MotionSequence& a, const MotionSequence& b);

double duration_seconds(const MotionSequence& seq) noexcept;

}  // namespace motionsplice
