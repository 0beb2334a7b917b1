#pragma once

#include <cstddef>

#include "motionsplice/motion.h"

namespace motionsplice {

// Error between two motions, split the way transition evaluations report it.
//   root_joint   - root joint position
//   global_traj  - root path projected on the ground plane (x, z)
//   mean_local   - all joints, positions relative to the frame's root
//   mean_global  - all joints, global positions
struct ApeAveReport {
  double root_joint = 0.0;
  double global_traj = 0.0;
  double mean_local = 0.0;
  double mean_global = 0.0;
};

// Euclidean norm of the pose change between frames junction and junction+1,
// with each frame expressed relative to its own root. Throws OutOfRange.
double transition_distance(const MotionSequence& seq, std::size_t junction);

// Largest transition_distance over consecutive frame pairs in [first, last).
double max_transition_distance(const MotionSequence& seq, std::size_t first, std::size_t last);

// Average positional error: per-frame (and per-joint) Euclidean distances,
// averaged. Throws ShapeMismatch unless both motions have the same F and J.
ApeAveReport ape(const MotionSequence& gt, const MotionSequence& gen);

// Average variance error: population variance over time of every joint
// coordinate, then the Euclidean norm of the per-joint variance difference
// (a 3-vector; 2-vector for global_traj), averaged over joints.
ApeAveReport ave(const MotionSequence& gt, const MotionSequence& gen);

}  // namespace motionsplice
