#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "fixtures.h"
#include "motionsplice/splice.h"

namespace motionsplice::testing {

struct SlideCase {
  MotionSequence motion;
  std::size_t junction = 0;
  std::size_t window = 0;
};

// Two standing clips whose foot placements differ by a random step, joined by
// splice_pair. The linear window drags both feet along the ground.
inline SlideCase make_slide_case(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> step(0.1, 0.6);
  std::uniform_real_distribution<double> heading(-3.14159, 3.14159);
  std::uniform_real_distribution<double> ground(-0.2, 0.2);
  std::uniform_int_distribution<std::size_t> len(12, 40);

  const double g = ground(rng);
  std::vector<double> a = tiny_rest_pose();
  for (std::size_t k = 1; k < a.size(); k += 3) {
    a[k] += g;
  }
  std::vector<double> b = a;
  for (const std::size_t foot : {3u, 4u}) {
    const double d = step(rng);
    const double h = heading(rng);
    b[foot * 3] += d * std::cos(h);
    b[foot * 3 + 2] += d * std::sin(h);
  }
  SpliceConfig cfg;
  const auto prev = annotate(constant_motion(tiny_skeleton(), a, len(rng)), "stand");
  const auto next = annotate(constant_motion(tiny_skeleton(), b, len(rng)), "stand");
  const auto spliced = splice_pair(prev, next, cfg);
  return {spliced.result.motion(), spliced.junction, cfg.window_frames()};
}

inline constexpr std::size_t kSlideSuiteSize = 100;

inline std::vector<SlideCase> slide_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SlideCase> out;
  for (std::size_t k = 0; k < kSlideSuiteSize; ++k) {
    out.push_back(make_slide_case(rng));
  }
  return out;
}

}  // namespace motionsplice::testing
