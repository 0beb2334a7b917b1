#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "motionsplice/diffusion/denoiser.h"
#include "motionsplice/diffusion/schedule.h"
#include "motionsplice/timed_script.h"

namespace motionsplice::diffusion {

struct TrainConfig {
  std::size_t epochs = 200;
  std::size_t batch_size = 16;
  double learning_rate = 1e-3;
  // The step size follows a cosine from learning_rate down to
  // learning_rate * final_lr_fraction over the whole run. 1 keeps it constant.
  double final_lr_fraction = 0.05;
  // Probability of replacing a sample's condition by the null token.
  double cond_dropout = 0.10;
  // Fraction of each window's frames masked (and noised) per sample.
  double mask_fraction = 0.10;
  std::uint64_t seed = 0;
  std::size_t hidden = 128;
  std::size_t time_dim = 32;
  std::size_t cond_dim = 16;
  // Spread of a clean window around its context-predicted mean, in codec
  // units; sets the denoiser's OutputScaling. 0 uses the plain network output.
  double prior_scale = 0.05;
  // Predict the masked frames as a correction to the linear in-between of
  // their neighbours (OutputScaling::interpolate). Needs prior_scale > 0.
  bool interpolate = true;
  // Adam moments.
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

// A window already in model space (see WindowCodec).
struct TrainingWindow {
  Eigen::VectorXd sample;
  Condition condition;
};

struct TrainResult {
  Denoiser denoiser;
  // Mean masked-frame loss of each epoch.
  std::vector<double> epoch_loss;
};

// Each epoch visits every window once in shuffled order. Per sample: draw a
// middle mask, a step t uniform in [1, T] and Gaussian noise; noise only the
// masked frames to level t; drop the condition with probability
// cfg.cond_dropout; the loss is the masked-frame MSE between the drawn and
// predicted noise. Parameters are updated with Adam after every minibatch.
// The step size of minibatch k out of K is lr * (f + (1 - f) * (1 + cos(pi k / K)) / 2).
// All windows must have joints * 3 * frames entries for one common frame
// count. Throws InvalidArgument on an empty corpus.
TrainResult train_stitcher(std::span<const TrainingWindow> corpus, std::size_t joints,
                           std::size_t vocab_size, const DiffusionSchedule& sched,
                           const TrainConfig& cfg);

// Condition token for a script: the index in `vocabulary` of the first word
// of its first segment, or null.
Condition condition_for(const TimedScript& script, const std::vector<std::string>& vocabulary);

}  // namespace motionsplice::diffusion
