#pragma once

#include <cstddef>

#include "motionsplice/bezier.h"
#include "motionsplice/motion.h"

namespace motionsplice {

struct FootRefineConfig {
  // Lift of the control point above the chord midpoint, meters (+y).
  double clearance = 0.05;
  // Fraction of the window given to the foot that moves first.
  double split_ratio = 0.5;
  // Move each foot's ankle (its parent joint) by the same per-frame offset as
  // the foot, so the shank does not stretch.
  bool carry_ankles = true;

  void validate() const;
};

struct FrameWindow {
  std::size_t start = 0;
  std::size_t length = 0;
};

// The arc a foot follows to get from `from` to `to`: control point at the
// chord midpoint raised by `clearance`.
BezierArc step_arc(const Vec3& from, const Vec3& to, double clearance);

// Rewrites both feet across frames [junction, junction + window).
//
// The window is split into phase A (first ceil(split_ratio * window) frames)
// and phase B (the rest). The foot that travels further between the window's
// first and last frame goes first (left foot on ties). In phase A that foot
// follows step_arc from its window-entry to its window-exit position, sampled
// at t = i / (phase_len - 1), while the other foot stays pinned at its entry
// position. In phase B the first foot stays at its exit position and the other
// foot takes its arc. Foot positions at the window's first and last frame are
// preserved; joints other than the feet (and ankles, see carry_ankles) are
// untouched.
//
// Throws WindowOutOfRange if the window does not fit in the sequence and
// InvalidArgument if either phase is shorter than two frames.
MotionSequence refine_transition_feet(const MotionSequence& seq, std::size_t junction,
                                      std::size_t window, const FootRefineConfig& cfg);

// Stance-proxy foot sliding: mean horizontal speed (m/s) over frames where a
// foot is within 5 mm of its lowest height in the window, pooled over both
// feet. Speed at frame f uses the forward difference to f + 1, so the last
// window frame contributes no sample. Returns 0 when no sample qualifies.
double foot_slide_score(const MotionSequence& seq, FrameWindow window);

inline constexpr double kStanceHeightTolerance = 0.005;

}  // namespace motionsplice
