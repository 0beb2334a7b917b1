#include "motionsplice/diffusion/schedule.h"

#include <cmath>
#include <string>

#include "motionsplice/error.h"

namespace motionsplice::diffusion {

DiffusionSchedule::DiffusionSchedule(std::size_t steps, double beta_start, double beta_end)
    : beta_start_(beta_start), beta_end_(beta_end) {
  if (steps == 0) {
    throw InvalidArgument("diffusion schedule needs at least one step");
  }
  if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0)) {
    throw InvalidArgument("beta range must satisfy 0 < beta_start <= beta_end < 1");
  }
  beta_.assign(steps + 1, 0.0);
  alpha_bar_.assign(steps + 1, 1.0);
  for (std::size_t t = 1; t <= steps; ++t) {
    const double frac =
        steps == 1 ? 0.0 : static_cast<double>(t - 1) / static_cast<double>(steps - 1);
    beta_[t] = beta_start + frac * (beta_end - beta_start);
    alpha_bar_[t] = alpha_bar_[t - 1] * (1.0 - beta_[t]);
  }
}

std::size_t DiffusionSchedule::check(std::size_t t) const {
  if (t == 0 || t > steps()) {
    throw OutOfRange("diffusion step " + std::to_string(t) + " outside [1, " +
                     std::to_string(steps()) + "]");
  }
  return t;
}

double DiffusionSchedule::alpha_bar(std::size_t t) const {
  if (t > steps()) {
    throw OutOfRange("diffusion step " + std::to_string(t) + " beyond T = " +
                     std::to_string(steps()));
  }
  return alpha_bar_[t];
}

DiffusionSchedule make_schedule(std::size_t steps, double beta_start, double beta_end) {
  return DiffusionSchedule(steps, beta_start, beta_end);
}

Eigen::VectorXd noise_to_level(const Eigen::VectorXd& x0, std::size_t t,
                               const Eigen::VectorXd& noise, const DiffusionSchedule& sched) {
  if (x0.size() != noise.size()) {
    throw ShapeMismatch("noise has " + std::to_string(noise.size()) + " entries, sample has " +
                        std::to_string(x0.size()));
  }
  if (t == 0) {
    return x0;
  }
  const double ab = sched.alpha_bar(t);
  return std::sqrt(ab) * x0 + std::sqrt(1.0 - ab) * noise;
}

Eigen::VectorXd forward_sample(const Eigen::VectorXd& x0, std::size_t t,
                               const Eigen::VectorXd& noise, const DiffusionSchedule& sched) {
  if (t == 0 || t > sched.steps()) {
    throw OutOfRange("diffusion step " + std::to_string(t) + " outside [1, " +
                     std::to_string(sched.steps()) + "]");
  }
  return noise_to_level(x0, t, noise, sched);
}

Eigen::VectorXd posterior_mean(const Eigen::VectorXd& x_t, std::size_t t,
                               const Eigen::VectorXd& pred_noise,
                               const DiffusionSchedule& sched) {
  if (x_t.size() != pred_noise.size()) {
    throw ShapeMismatch("noise prediction does not match sample size");
  }
  const double beta = sched.beta(t);
  const double coef = beta / std::sqrt(1.0 - sched.alpha_bar(t));
  return (x_t - coef * pred_noise) / std::sqrt(1.0 - beta);
}

Eigen::VectorXd reverse_step(const Eigen::VectorXd& x_t, std::size_t t,
                             const Eigen::VectorXd& pred_noise, const DiffusionSchedule& sched,
                             const Eigen::VectorXd& z) {
  Eigen::VectorXd mean = posterior_mean(x_t, t, pred_noise, sched);
  if (t == 1) {
    return mean;
  }
  if (z.size() != mean.size()) {
    throw ShapeMismatch("reverse-step noise does not match sample size");
  }
  return mean + std::sqrt(sched.beta(t)) * z;
}

Eigen::VectorXd reverse_step(const Eigen::VectorXd& x_t, std::size_t t,
                             const Eigen::VectorXd& pred_noise, const DiffusionSchedule& sched,
                             std::mt19937_64& rng) {
  if (t == 1) {
    return posterior_mean(x_t, t, pred_noise, sched);
  }
  return reverse_step(x_t, t, pred_noise, sched, standard_normal(x_t.size(), rng));
}

Eigen::VectorXd standard_normal(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = normal(rng);
  }
  return out;
}

std::vector<bool> FrameMask::flags() const {
  std::vector<bool> out(window_frames, false);
  for (std::size_t f = start; f < start + length && f < window_frames; ++f) {
    out[f] = true;
  }
  return out;
}

FrameMask mask_middle(std::size_t window_frames, double fraction, std::mt19937_64& rng) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw InvalidArgument("mask fraction must lie strictly between 0 and 1");
  }
  // Ties round to even: 9.5 -> 10, 0.5 -> 0.
  const auto length =
      static_cast<std::size_t>(std::nearbyint(fraction * static_cast<double>(window_frames)));
  if (length == 0) {
    throw InvalidArgument("masking " + std::to_string(fraction) + " of " +
                          std::to_string(window_frames) + " frames rounds to zero frames");
  }
  const std::size_t lo = window_frames / 3;
  const std::size_t hi = window_frames - lo;  // exclusive end of the middle third
  FrameMask mask{window_frames, 0, length};
  if (length > hi - lo) {
    mask.start = (window_frames - length) / 2;
  } else {
    mask.start = std::uniform_int_distribution<std::size_t>(lo, hi - length)(rng);
  }
  return mask;
}

}  // namespace motionsplice::diffusion
