#include "motionsplice/foot_refine.h"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "motionsplice/error.h"

namespace motionsplice {

void FootRefineConfig::validate() const {
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
    throw InvalidArgument("split_ratio must lie strictly between 0 and 1");
  }
  if (!(clearance >= 0.0) || !std::isfinite(clearance)) {
    throw InvalidArgument("clearance must be finite and non-negative");
  }
}

BezierArc step_arc(const Vec3& from, const Vec3& to, double clearance) {
  Vec3 control = 0.5 * (from + to);
  control.y() += clearance;
  return BezierArc{from, control, to};
}

namespace {

void write(std::vector<double>& data, std::size_t stride, std::size_t frame, std::size_t joint,
           const Vec3& p) {
  const std::size_t i = frame * stride + joint * 3;
  data[i] = p.x();
  data[i + 1] = p.y();
  data[i + 2] = p.z();
}

void shift(std::vector<double>& data, std::size_t stride, std::size_t frame, std::size_t joint,
           const Vec3& d) {
  const std::size_t i = frame * stride + joint * 3;
  data[i] += d.x();
  data[i + 1] += d.y();
  data[i + 2] += d.z();
}

}  // namespace

MotionSequence refine_transition_feet(const MotionSequence& seq, std::size_t junction,
                                      std::size_t window, const FootRefineConfig& cfg) {
  cfg.validate();
  if (window == 0 || junction + window > seq.frame_count()) {
    throw WindowOutOfRange("window [" + std::to_string(junction) + ", " +
                           std::to_string(junction + window) + ") outside sequence of " +
                           std::to_string(seq.frame_count()) + " frames");
  }
  const auto phase_a = static_cast<std::size_t>(
      std::ceil(cfg.split_ratio * static_cast<double>(window)));
  const std::size_t phase_b = window - std::min(phase_a, window);
  if (phase_a < 2 || phase_b < 2) {
    throw InvalidArgument("window of " + std::to_string(window) +
                          " frames is too short to give each foot two frames");
  }

  const Skeleton& sk = seq.skeleton();
  const std::size_t first_frame = junction;
  const std::size_t last_frame = junction + window - 1;

  std::array<std::size_t, 2> feet = {sk.special().left_foot, sk.special().right_foot};
  const double left_travel =
      (seq.position(last_frame, feet[0]) - seq.position(first_frame, feet[0])).norm();
  const double right_travel =
      (seq.position(last_frame, feet[1]) - seq.position(first_frame, feet[1])).norm();
  if (right_travel > left_travel) {
    std::swap(feet[0], feet[1]);
  }

  const std::array<Vec3, 2> entry = {seq.position(first_frame, feet[0]),
                                     seq.position(first_frame, feet[1])};
  const std::array<Vec3, 2> exit = {seq.position(last_frame, feet[0]),
                                    seq.position(last_frame, feet[1])};
  const std::array<BezierArc, 2> arcs = {step_arc(entry[0], exit[0], cfg.clearance),
                                         step_arc(entry[1], exit[1], cfg.clearance)};

  std::vector<double> out(seq.data().begin(), seq.data().end());
  const std::size_t stride = seq.stride();

  for (std::size_t i = 0; i < window; ++i) {
    const std::size_t f = junction + i;
    std::array<Vec3, 2> target;
    if (i < phase_a) {
      const double t = static_cast<double>(i) / static_cast<double>(phase_a - 1);
      target = {bezier_eval(arcs[0], t), entry[1]};
    } else {
      const double t =
          static_cast<double>(i - phase_a) / static_cast<double>(phase_b - 1);
      target = {exit[0], bezier_eval(arcs[1], t)};
    }
    for (std::size_t k = 0; k < 2; ++k) {
      const Vec3 delta = target[k] - seq.position(f, feet[k]);
      write(out, stride, f, feet[k], target[k]);
      if (cfg.carry_ankles) {
        if (const auto ankle = sk.ankle_of(feet[k])) {
          shift(out, stride, f, *ankle, delta);
        }
      }
    }
  }
  return MotionSequence(seq.skeleton_ptr(), seq.fps(), std::move(out));
}

double foot_slide_score(const MotionSequence& seq, FrameWindow window) {
  if (window.length < 2 || window.start + window.length > seq.frame_count()) {
    throw WindowOutOfRange("slide window [" + std::to_string(window.start) + ", " +
                           std::to_string(window.start + window.length) +
                           ") invalid for " + std::to_string(seq.frame_count()) + " frames");
  }
  const SpecialJoints& sj = seq.skeleton().special();
  double speed_sum = 0.0;
  std::size_t samples = 0;
  for (const std::size_t foot : {sj.left_foot, sj.right_foot}) {
    double lowest = seq.position(window.start, foot).y();
    for (std::size_t f = window.start; f < window.start + window.length; ++f) {
      lowest = std::min(lowest, seq.position(f, foot).y());
    }
    for (std::size_t f = window.start; f + 1 < window.start + window.length; ++f) {
      const Vec3 p = seq.position(f, foot);
      if (p.y() > lowest + kStanceHeightTolerance) {
        continue;
      }
      const Vec3 d = seq.position(f + 1, foot) - p;
      speed_sum += std::hypot(d.x(), d.z()) * seq.fps();
      ++samples;
    }
  }
  return samples == 0 ? 0.0 : speed_sum / static_cast<double>(samples);
}

}  // namespace motionsplice
