#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace motionsplice::diffusion {

// Linear noise schedule over steps t = 1..T. Index 0 of alpha_bar is the
// clean level (alpha_bar(0) == 1).
class DiffusionSchedule {
 public:
  // Throws InvalidArgument unless T >= 1 and 0 < beta_start <= beta_end < 1.
  DiffusionSchedule(std::size_t steps, double beta_start, double beta_end);

  std::size_t steps() const noexcept { return beta_.size() - 1; }
  double beta_start() const noexcept { return beta_start_; }
  double beta_end() const noexcept { return beta_end_; }

  double beta(std::size_t t) const { return beta_.at(check(t)); }
  double alpha(std::size_t t) const { return 1.0 - beta(t); }
  // Cumulative product of alpha over 1..t; t may be 0.
  double alpha_bar(std::size_t t) const;

 private:
  std::size_t check(std::size_t t) const;

  double beta_start_;
  double beta_end_;
  std::vector<double> beta_;       // [0] unused
  std::vector<double> alpha_bar_;  // [0] == 1
};

inline constexpr std::size_t kDefaultSteps = 1000;
inline constexpr double kDefaultBetaStart = 1e-4;
inline constexpr double kDefaultBetaEnd = 0.02;

DiffusionSchedule make_schedule(std::size_t steps = kDefaultSteps,
                                double beta_start = kDefaultBetaStart,
                                double beta_end = kDefaultBetaEnd);

// Closed-form marginal sqrt(abar_t) x0 + sqrt(1 - abar_t) noise for 1 <= t <= T.
// Throws OutOfRange for other t and ShapeMismatch if sizes differ.
Eigen::VectorXd forward_sample(const Eigen::VectorXd& x0, std::size_t t,
                               const Eigen::VectorXd& noise, const DiffusionSchedule& sched);

// As forward_sample but also accepts t == 0, which returns x0 unchanged.
Eigen::VectorXd noise_to_level(const Eigen::VectorXd& x0, std::size_t t,
                               const Eigen::VectorXd& noise, const DiffusionSchedule& sched);

// Posterior mean (1/sqrt(alpha_t)) (x_t - beta_t / sqrt(1 - abar_t) * pred_noise).
Eigen::VectorXd posterior_mean(const Eigen::VectorXd& x_t, std::size_t t,
                               const Eigen::VectorXd& pred_noise, const DiffusionSchedule& sched);

// One ancestral step: posterior_mean + sqrt(beta_t) z, with z = `z` for t > 1
// and no noise at t == 1.
Eigen::VectorXd reverse_step(const Eigen::VectorXd& x_t, std::size_t t,
                             const Eigen::VectorXd& pred_noise, const DiffusionSchedule& sched,
                             const Eigen::VectorXd& z);

// Same, drawing z ~ N(0, I) from `rng` (nothing is drawn at t == 1).
Eigen::VectorXd reverse_step(const Eigen::VectorXd& x_t, std::size_t t,
                             const Eigen::VectorXd& pred_noise, const DiffusionSchedule& sched,
                             std::mt19937_64& rng);

Eigen::VectorXd standard_normal(Eigen::Index n, std::mt19937_64& rng);

// A contiguous block of masked frames inside a window.
struct FrameMask {
  std::size_t window_frames = 0;
  std::size_t start = 0;
  std::size_t length = 0;

  bool masked(std::size_t frame) const noexcept {
    return frame >= start && frame < start + length;
  }
  std::vector<bool> flags() const;
};

// round-half-even(fraction * window_frames) contiguous frames whose start is uniform
// over the positions that keep the block inside the middle third
// [floor(n/3), n - floor(n/3)). A block longer than the middle third is
// centered. Throws InvalidArgument when 0 < fraction < 1 fails or the block
// rounds to zero frames.
FrameMask mask_middle(std::size_t window_frames, double fraction, std::mt19937_64& rng);

}  // namespace motionsplice::diffusion
