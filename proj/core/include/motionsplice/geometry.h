#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "motionsplice/motion.h"

namespace motionsplice {

// Norms below this are treated as "no direction".
inline constexpr double kDegenerateNorm = 1e-9;

// Unit vector from the neck joint to the head joint at `frame`.
// Throws OutOfRange for a bad frame and DegenerateDirection when the two
// joints coincide.
Vec3 facing_direction(const MotionSequence& seq, std::size_t frame);

// The head-neck vector projected onto the ground plane (y up) and normalized.
// For upright poses this is the body lean direction rather than a near-vertical
// axis.
Vec3 facing_direction_horizontal(const MotionSequence& seq, std::size_t frame);

using Trajectory = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

// Root joint position per frame (F x 3).
Trajectory root_trajectory(const MotionSequence& seq);

}  // namespace motionsplice
