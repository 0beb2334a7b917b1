#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "motionsplice/motion.h"
#include "motionsplice/skeleton.h"
#include "motionsplice/timed_script.h"

namespace motionsplice::testing {

// Five joints: root, neck above it, head above the neck, two feet.
inline std::shared_ptr<const Skeleton> tiny_skeleton() {
  static const auto sk = std::make_shared<const Skeleton>(
      std::vector<std::string>{"root", "neck", "head", "left_foot", "right_foot"},
      std::vector<int>{-1, 0, 1, 0, 0}, SpecialJoints{0, 1, 2, 3, 4});
  return sk;
}

// Upright rest pose of the tiny skeleton at the origin.
inline std::vector<double> tiny_rest_pose() {
  return {0.0, 1.0, 0.0,  0.0, 1.5, 0.0,  0.0, 1.7, 0.05,  -0.1, 0.0, 0.0,  0.1, 0.0, 0.0};
}

inline MotionSequence constant_motion(std::shared_ptr<const Skeleton> sk,
                                      const std::vector<double>& pose, std::size_t frames,
                                      double fps = kDefaultFps) {
  std::vector<double> data;
  data.reserve(frames * pose.size());
  for (std::size_t f = 0; f < frames; ++f) {
    data.insert(data.end(), pose.begin(), pose.end());
  }
  return MotionSequence(std::move(sk), fps, std::move(data));
}

// Every coordinate uniform in [-scale, scale] around `pose`, independently per
// frame.
inline MotionSequence jittered_motion(std::shared_ptr<const Skeleton> sk,
                                      const std::vector<double>& pose, std::size_t frames,
                                      double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> data;
  data.reserve(frames * pose.size());
  for (std::size_t f = 0; f < frames; ++f) {
    for (const double v : pose) {
      data.push_back(v + u(rng));
    }
  }
  return MotionSequence(std::move(sk), kDefaultFps, std::move(data));
}

inline MotionSequence random_motion(std::shared_ptr<const Skeleton> sk, std::size_t frames,
                                    double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> data(frames * sk->joint_count() * 3);
  for (auto& v : data) {
    v = u(rng);
  }
  return MotionSequence(std::move(sk), kDefaultFps, std::move(data));
}

inline AnnotatedMotion annotate(MotionSequence m, const std::string& text) {
  const std::size_t f = m.frame_count();
  return AnnotatedMotion(std::move(m), TimedScript::single(text, f));
}

// Largest per-joint displacement between consecutive frames in [first, last).
inline double max_joint_step(const MotionSequence& m, std::size_t first, std::size_t last) {
  double best = 0.0;
  for (std::size_t f = first; f < last; ++f) {
    for (std::size_t j = 0; j < m.joint_count(); ++j) {
      best = std::max(best, (m.position(f + 1, j) - m.position(f, j)).norm());
    }
  }
  return best;
}

}  // namespace motionsplice::testing
