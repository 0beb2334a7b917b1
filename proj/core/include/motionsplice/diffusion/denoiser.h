#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "motionsplice/diffusion/schedule.h"

namespace motionsplice::diffusion {

// Condition token index into the model vocabulary; nullopt is the null
// (unconditional) token.
using Condition = std::optional<std::size_t>;

struct DenoiserDims {
  std::size_t frames = 0;
  std::size_t joints = 0;
  std::size_t time_dim = 32;
  std::size_t cond_dim = 16;
  std::size_t hidden = 128;
  // Number of real condition tokens; one extra learned null token is added.
  std::size_t vocab_size = 0;

  std::size_t sample_size() const noexcept { return frames * joints * 3; }
  // Flattened window, per-frame mask flag, time embedding, condition embedding.
  std::size_t input_size() const noexcept { return sample_size() + frames + time_dim + cond_dim; }
  std::size_t parameter_count() const noexcept;

  bool operator==(const DenoiserDims&) const = default;
};

// Sinusoidal embedding of the diffusion step: [sin(t w_k), cos(t w_k)] with
// w_k = 10000^(-k / (dim/2)). dim must be even.
Eigen::VectorXd time_embedding(std::size_t t, std::size_t dim);

// One training example: the noisy window, the noise that was added to its
// masked frames, and what the network is told about it.
struct TrainingSample {
  Eigen::VectorXd noisy;
  Eigen::VectorXd noise;
  std::size_t t = 1;
  Condition condition;
  FrameMask mask;
};

// Fixed per-step mixing of the network output h with the input:
// eps = skip[t] * x_t + out[t] * (h + base). Empty tables mean eps = h.
//
// With `interpolate`, base holds on each masked frame the linear blend of the
// unmasked frames on either side of the masked block (the nearer one alone at
// a window edge), and zero elsewhere, so h is a correction to the in-between.
struct OutputScaling {
  // s in gaussian(); 0 for the identity scaling.
  double prior_scale = 0.0;
  bool interpolate = false;
  std::vector<double> skip;
  std::vector<double> out;

  // With a = sqrt(alpha_bar_t), sigma = sqrt(1 - alpha_bar_t) and
  // d = a^2 s^2 + sigma^2: skip = sigma / d, out = -a sigma / d. If h is the
  // mean of x0 given the context and x0 ~ N(h, s^2), eps is the posterior mean
  // of the noise. The network then predicts a clean window rather than noise,
  // which it can do from the context at every step.
  static OutputScaling gaussian(const DiffusionSchedule& sched, double prior_scale,
                                bool interpolate = true);

  bool empty() const noexcept { return skip.empty(); }
  bool operator==(const OutputScaling&) const = default;
};

// Noise predictor eps(x_t, t, c): a fully connected network with two SiLU
// hidden layers over [x_t | mask flags | time embedding | condition embedding],
// combined with x_t through an OutputScaling. Output has the shape of x_t.
//
// Parameters live in one flat vector, column-major blocks in this order:
//   W1 (hidden x input), b1, W2 (hidden x hidden), b2, W3 (sample x hidden),
//   b3, E (cond_dim x (vocab_size + 1)); the last column of E is the null token.
class Denoiser {
 public:
  // Non-empty scaling tables must cover t = 0..T.
  Denoiser(DenoiserDims dims, Eigen::VectorXd parameters, OutputScaling scaling = {});

  // LeCun-normal weights, zero biases, unit-normal embeddings; the output layer
  // is scaled down so initial predictions are small.
  static Denoiser initialize(DenoiserDims dims, std::mt19937_64& rng,
                             OutputScaling scaling = {});

  const DenoiserDims& dims() const noexcept { return dims_; }
  const Eigen::VectorXd& parameters() const noexcept { return params_; }
  Eigen::VectorXd& parameters() noexcept { return params_; }
  const OutputScaling& scaling() const noexcept { return scaling_; }

  // Throws ShapeMismatch on wrong input size, OutOfRange on a bad token.
  Eigen::VectorXd predict(const Eigen::VectorXd& x_t, std::size_t t, Condition c,
                          const FrameMask& mask) const;

  // Mean over the batch of the mean squared error between predicted and true
  // noise, restricted to masked frames. Writes d(loss)/d(parameters) into
  // `gradient` when non-null.
  double masked_loss(std::span<const TrainingSample> batch, Eigen::VectorXd* gradient) const;

 private:
  struct Layout;
  Eigen::MatrixXd assemble_inputs(std::span<const Eigen::VectorXd* const> x,
                                  std::span<const std::size_t> t,
                                  std::span<const Condition> c,
                                  std::span<const FrameMask* const> masks) const;
  std::size_t token_column(Condition c) const;
  // (skip, out) gains for step t.
  std::pair<double, double> gains(std::size_t t) const;
  void add_interpolation(const Eigen::VectorXd& x, const FrameMask& mask,
                         Eigen::Ref<Eigen::VectorXd> h) const;

  DenoiserDims dims_;
  Eigen::VectorXd params_;
  OutputScaling scaling_;
};

// Classifier-free guidance: (1 - s) * eps(x_t, t, null) + s * eps(x_t, t, c),
// i.e. eps_null + s * (eps_c - eps_null). With c == null the unconditional
// prediction is returned as is.
Eigen::VectorXd cfg_predict(const Denoiser& d, const Eigen::VectorXd& x_t, std::size_t t,
                            Condition c, double guidance_scale, const FrameMask& mask);

}  // namespace motionsplice::diffusion
