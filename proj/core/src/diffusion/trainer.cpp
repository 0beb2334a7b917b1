#include "motionsplice/diffusion/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "motionsplice/error.h"

namespace motionsplice::diffusion {

void TrainConfig::validate() const {
  if (epochs == 0 || batch_size == 0) {
    throw InvalidArgument("epochs and batch_size must be positive");
  }
  if (!(learning_rate > 0.0)) {
    throw InvalidArgument("learning_rate must be positive");
  }
  if (!(final_lr_fraction > 0.0 && final_lr_fraction <= 1.0)) {
    throw InvalidArgument("final_lr_fraction must lie in (0, 1]");
  }
  if (!(cond_dropout >= 0.0 && cond_dropout <= 1.0)) {
    throw InvalidArgument("cond_dropout must lie in [0, 1]");
  }
  if (!(mask_fraction > 0.0 && mask_fraction < 1.0)) {
    throw InvalidArgument("mask_fraction must lie strictly between 0 and 1");
  }
  if (!(prior_scale >= 0.0) || !std::isfinite(prior_scale)) {
    throw InvalidArgument("prior_scale must be finite and non-negative");
  }
  if (interpolate && prior_scale == 0.0) {
    throw InvalidArgument("interpolate needs a positive prior_scale");
  }
  if (time_dim % 2 != 0 || time_dim == 0 || cond_dim == 0 || hidden == 0) {
    throw InvalidArgument("network sizes must be positive and time_dim even");
  }
}

TrainResult train_stitcher(std::span<const TrainingWindow> corpus, std::size_t joints,
                           std::size_t vocab_size, const DiffusionSchedule& sched,
                           const TrainConfig& cfg) {
  cfg.validate();
  if (corpus.empty()) {
    throw InvalidArgument("cannot train the stitcher on an empty corpus");
  }
  if (joints == 0) {
    throw InvalidArgument("joint count must be positive");
  }
  const auto n = static_cast<std::size_t>(corpus.front().sample.size());
  const std::size_t stride = joints * 3;
  if (n == 0 || n % stride != 0) {
    throw ShapeMismatch("window size " + std::to_string(n) + " is not a multiple of joints*3");
  }
  for (const auto& w : corpus) {
    if (static_cast<std::size_t>(w.sample.size()) != n) {
      throw ShapeMismatch("training windows must all have the same length");
    }
    if (w.condition && *w.condition >= vocab_size) {
      throw OutOfRange("training window condition outside vocabulary");
    }
  }

  DenoiserDims dims;
  dims.frames = n / stride;
  dims.joints = joints;
  dims.time_dim = cfg.time_dim;
  dims.cond_dim = cfg.cond_dim;
  dims.hidden = cfg.hidden;
  dims.vocab_size = vocab_size;

  std::mt19937_64 rng(cfg.seed);
  const OutputScaling scaling =
      cfg.prior_scale > 0.0 ? OutputScaling::gaussian(sched, cfg.prior_scale, cfg.interpolate)
                            : OutputScaling{};
  Denoiser model = Denoiser::initialize(dims, rng, scaling);

  const Eigen::Index p = model.parameters().size();
  Eigen::VectorXd m1 = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd m2 = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd grad(p);
  std::size_t step = 0;
  const std::size_t batches_per_epoch = (corpus.size() + cfg.batch_size - 1) / cfg.batch_size;
  const double total_steps = static_cast<double>(batches_per_epoch * cfg.epochs);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_t(1, sched.steps());
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainResult result{model, {}};
  std::vector<TrainingSample> batch;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
      batch.clear();
      for (std::size_t i = begin; i < end; ++i) {
        const TrainingWindow& w = corpus[order[i]];
        TrainingSample s;
        s.mask = mask_middle(dims.frames, cfg.mask_fraction, rng);
        s.t = pick_t(rng);
        s.noise = standard_normal(static_cast<Eigen::Index>(n), rng);
        s.noisy = w.sample;
        const auto off = static_cast<Eigen::Index>(s.mask.start * stride);
        const auto len = static_cast<Eigen::Index>(s.mask.length * stride);
        s.noisy.segment(off, len) = forward_sample(w.sample.segment(off, len), s.t,
                                                   s.noise.segment(off, len), sched);
        s.condition = unit(rng) < cfg.cond_dropout ? std::nullopt : w.condition;
        batch.push_back(std::move(s));
      }
      loss_sum += model.masked_loss(batch, &grad);
      ++batches;

      const double progress = static_cast<double>(step) / total_steps;
      const double lr =
          cfg.learning_rate * (cfg.final_lr_fraction + (1.0 - cfg.final_lr_fraction) * 0.5 *
                                                           (1.0 + std::cos(M_PI * progress)));
      ++step;
      m1 = cfg.beta1 * m1 + (1.0 - cfg.beta1) * grad;
      m2 = cfg.beta2 * m2 + (1.0 - cfg.beta2) * grad.cwiseAbs2();
      const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      model.parameters().array() -=
          lr * (m1.array() / c1) / ((m2.array() / c2).sqrt() + cfg.epsilon);
    }
    result.epoch_loss.push_back(loss_sum / static_cast<double>(batches));
  }
  result.denoiser = std::move(model);
  return result;
}

Condition condition_for(const TimedScript& script, const std::vector<std::string>& vocabulary) {
  if (script.empty()) {
    return std::nullopt;
  }
  const std::string& text = script.segments().front().text;
  const std::string word = text.substr(0, text.find(' '));
  const auto it = std::find(vocabulary.begin(), vocabulary.end(), word);
  if (it == vocabulary.end()) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - vocabulary.begin());
}

}  // namespace motionsplice::diffusion
