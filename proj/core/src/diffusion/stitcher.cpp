#include "motionsplice/diffusion/stitcher.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "motionsplice/error.h"
#include "motionsplice/splice.h"

namespace motionsplice::diffusion {

WindowCodec::WindowCodec(std::size_t frames, std::size_t joints, std::size_t root,
                         Eigen::VectorXd mean, Eigen::VectorXd scale)
    : frames_(frames), joints_(joints), root_(root), mean_(std::move(mean)),
      scale_(std::move(scale)) {
  if (root_ >= joints_) {
    throw InvalidArgument("codec root joint out of range");
  }
  const auto n = static_cast<Eigen::Index>(frames_ * joints_ * 3);
  if (n == 0 || mean_.size() != n || scale_.size() != n) {
    throw ShapeMismatch("codec statistics do not match the window shape");
  }
  if ((scale_.array() <= 0.0).any() || !mean_.allFinite() || !scale_.allFinite()) {
    throw InvalidArgument("codec scales must be positive and all statistics finite");
  }
}

Vec3 WindowCodec::reference(std::span<const double> raw) const {
  const std::size_t stride = joints_ * 3;
  if (raw.size() != frames_ * stride) {
    throw ShapeMismatch("raw window does not match codec shape");
  }
  const std::size_t a = root_ * 3;
  const std::size_t b = (frames_ - 1) * stride + root_ * 3;
  return {0.5 * (raw[a] + raw[b]), 0.0, 0.5 * (raw[a + 2] + raw[b + 2])};
}

Eigen::VectorXd WindowCodec::encode(std::span<const double> raw, const Vec3& reference) const {
  if (raw.size() != static_cast<std::size_t>(mean_.size())) {
    throw ShapeMismatch("raw window does not match codec shape");
  }
  const std::size_t stride = joints_ * 3;
  const std::size_t r = root_ * 3;
  Eigen::VectorXd out(mean_.size());
  for (std::size_t f = 0; f < frames_; ++f) {
    const std::size_t base = f * stride;
    for (std::size_t k = 0; k < stride; ++k) {
      const double origin = k / 3 == root_ ? reference[k % 3] : raw[base + r + k % 3];
      const auto i = static_cast<Eigen::Index>(base + k);
      out[i] = (raw[base + k] - origin - mean_[i]) / scale_[i];
    }
  }
  return out;
}

std::vector<double> WindowCodec::decode(const Eigen::VectorXd& encoded,
                                        const Vec3& reference) const {
  if (encoded.size() != mean_.size()) {
    throw ShapeMismatch("encoded window does not match codec shape");
  }
  const std::size_t stride = joints_ * 3;
  const std::size_t r = root_ * 3;
  std::vector<double> out(static_cast<std::size_t>(encoded.size()));
  for (std::size_t f = 0; f < frames_; ++f) {
    const std::size_t base = f * stride;
    Vec3 root;
    for (std::size_t c = 0; c < 3; ++c) {
      const auto i = static_cast<Eigen::Index>(base + r + c);
      root[static_cast<Eigen::Index>(c)] = encoded[i] * scale_[i] + mean_[i] + reference[c];
    }
    for (std::size_t k = 0; k < stride; ++k) {
      const auto i = static_cast<Eigen::Index>(base + k);
      const double origin = k / 3 == root_ ? reference[k % 3] : root[k % 3];
      out[base + k] = encoded[i] * scale_[i] + mean_[i] + origin;
    }
  }
  return out;
}

WindowCodec WindowCodec::fit(std::span<const MotionSequence> windows) {
  if (windows.empty()) {
    throw InvalidArgument("codec needs at least one window");
  }
  const std::size_t frames = windows.front().frame_count();
  const std::size_t joints = windows.front().joint_count();
  const std::size_t root = windows.front().skeleton().special().root;
  const auto n = static_cast<Eigen::Index>(frames * joints * 3);
  // Identity statistics give the plain change of origin.
  const WindowCodec shift(frames, joints, root, Eigen::VectorXd::Zero(n),
                          Eigen::VectorXd::Ones(n));
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(n);
  for (const auto& w : windows) {
    if (w.frame_count() != frames || w.joint_count() != joints) {
      throw ShapeMismatch("codec windows must share one shape");
    }
    if (w.skeleton().special().root != root) {
      throw ShapeMismatch("codec windows must share one root joint");
    }
    const Eigen::VectorXd v = shift.encode(w.data(), shift.reference(w.data()));
    sum += v;
    sq += v.cwiseAbs2();
  }
  // Pool over frames so every frame shares one affine map; blends of encoded
  // frames are then encodings of blended frames.
  const auto stride = static_cast<Eigen::Index>(joints * 3);
  const double inv = 1.0 / static_cast<double>(windows.size() * frames);
  Eigen::VectorXd feat_sum = Eigen::VectorXd::Zero(stride);
  Eigen::VectorXd feat_sq = Eigen::VectorXd::Zero(stride);
  for (std::size_t f = 0; f < frames; ++f) {
    feat_sum += sum.segment(static_cast<Eigen::Index>(f) * stride, stride);
    feat_sq += sq.segment(static_cast<Eigen::Index>(f) * stride, stride);
  }
  const Eigen::VectorXd feat_mean = feat_sum * inv;
  const Eigen::VectorXd feat_var = feat_sq * inv - feat_mean.cwiseAbs2();
  const Eigen::VectorXd feat_scale = feat_var.cwiseMax(0.0).cwiseSqrt().cwiseMax(kMinScale);
  Eigen::VectorXd mean(n);
  Eigen::VectorXd scale(n);
  for (std::size_t f = 0; f < frames; ++f) {
    mean.segment(static_cast<Eigen::Index>(f) * stride, stride) = feat_mean;
    scale.segment(static_cast<Eigen::Index>(f) * stride, stride) = feat_scale;
  }
  return WindowCodec(frames, joints, root, mean, scale);
}

Condition StitcherModel::token(std::string_view label) const {
  const auto it = std::find(vocabulary.begin(), vocabulary.end(), label);
  if (it == vocabulary.end()) {
    throw InvalidArgument("condition '" + std::string(label) + "' is not in the model vocabulary");
  }
  return static_cast<std::size_t>(it - vocabulary.begin());
}

FitResult fit_stitcher(std::span<const MotionWindow> windows, std::vector<std::string> vocabulary,
                       const DiffusionSchedule& sched, const TrainConfig& cfg) {
  if (windows.empty()) {
    throw InvalidArgument("cannot train the stitcher on an empty corpus");
  }
  std::vector<MotionSequence> frames;
  frames.reserve(windows.size());
  for (const auto& w : windows) {
    frames.push_back(w.frames);
  }
  WindowCodec codec = WindowCodec::fit(frames);

  std::vector<TrainingWindow> encoded;
  encoded.reserve(windows.size());
  for (const auto& w : windows) {
    const auto raw = w.frames.data();
    encoded.push_back(
        {codec.encode(raw, codec.reference(raw)), w.condition});
  }
  TrainResult trained =
      train_stitcher(encoded, codec.joints(), vocabulary.size(), sched, cfg);
  return FitResult{StitcherModel{sched, std::move(trained.denoiser), std::move(vocabulary),
                                 std::move(codec)},
                   std::move(trained.epoch_loss)};
}

std::vector<MotionWindow> sample_windows(std::span<const AnnotatedMotion> clips,
                                         std::size_t frames, std::size_t count,
                                         const std::vector<std::string>& vocabulary,
                                         std::mt19937_64& rng) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    if (clips[i].frame_count() >= frames) {
      eligible.push_back(i);
    }
  }
  if (eligible.empty() || frames == 0) {
    throw InvalidArgument("no clip holds a window of " + std::to_string(frames) + " frames");
  }
  std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
  std::vector<MotionWindow> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const AnnotatedMotion& clip = clips[eligible[pick(rng)]];
    const std::size_t offset =
        std::uniform_int_distribution<std::size_t>(0, clip.frame_count() - frames)(rng);
    out.push_back({clip.motion().slice(offset, offset + frames),
                   condition_for(clip.script(), vocabulary)});
  }
  return out;
}

StitchResult stitch(const StitchJob& job, const StitcherModel& model, std::mt19937_64& rng,
                    const StitchOptions& options) {
  const std::size_t w = model.window_frames();
  const std::size_t len = job.transition_len;
  if (len == 0 || len + 2 > w) {
    throw ShapeMismatch("transition of " + std::to_string(len) +
                        " frames does not fit a model window of " + std::to_string(w) +
                        " with context on both sides");
  }
  const std::size_t before = (w - len) / 2;
  const std::size_t after = w - len - before;
  if (job.prev.frame_count() < before || job.next.frame_count() < after) {
    throw ShapeMismatch("stitching needs " + std::to_string(before) + " frames of prev and " +
                        std::to_string(after) + " frames of next");
  }
  if (job.prev.joint_count() != model.codec.joints() ||
      !(job.prev.skeleton() == job.next.skeleton())) {
    throw ShapeMismatch("clip skeletons do not match the model");
  }
  if (job.prev.fps() != job.next.fps()) {
    throw ShapeMismatch("cannot stitch clips recorded at different fps");
  }

  const MotionSequence next = options.align_next ? root_align(job.prev, job.next) : job.next;
  const std::size_t stride = job.prev.stride();

  // Raw window with a zero placeholder gap.
  std::vector<double> raw(w * stride, 0.0);
  const auto prev_tail = job.prev.slice(job.prev.frame_count() - before, job.prev.frame_count());
  const auto next_head = next.slice(0, after);
  std::copy(prev_tail.data().begin(), prev_tail.data().end(), raw.begin());
  std::copy(next_head.data().begin(), next_head.data().end(),
            raw.begin() + static_cast<std::ptrdiff_t>((before + len) * stride));

  if (job.prev.skeleton().special().root != model.codec.root()) {
    throw ShapeMismatch("clip root joint does not match the model");
  }
  const Vec3 ref = model.codec.reference(raw);
  const Eigen::VectorXd known = model.codec.encode(raw, ref);
  const FrameMask mask{w, before, len};
  const auto gap_begin = static_cast<Eigen::Index>(before * stride);
  const auto gap_size = static_cast<Eigen::Index>(len * stride);
  const auto n = static_cast<Eigen::Index>(w * stride);

  const DiffusionSchedule& sched = model.schedule;
  const std::size_t steps = sched.steps();

  auto clamp = [&](Eigen::VectorXd& x, std::size_t level, Eigen::VectorXd& noise) {
    const Eigen::VectorXd gap = x.segment(gap_begin, gap_size);
    if (options.clamp == ClampMode::kRenoise) {
      noise = standard_normal(n, rng);
      x = noise_to_level(known, level, noise, sched);
    } else {
      noise.setZero(n);
      x = known;
    }
    x.segment(gap_begin, gap_size) = gap;
  };

  Eigen::VectorXd x = known;
  Eigen::VectorXd clamp_noise;
  x.segment(gap_begin, gap_size) = standard_normal(gap_size, rng);
  clamp(x, steps, clamp_noise);

  for (std::size_t t = steps; t >= 1; --t) {
    const Eigen::VectorXd eps =
        cfg_predict(model.denoiser, x, t, job.condition, job.guidance_scale, mask);
    x = reverse_step(x, t, eps, sched, rng);
    clamp(x, t - 1, clamp_noise);
    if (options.observer) {
      options.observer(StitchStep{t - 1, x, known, clamp_noise, mask});
    }
  }

  const std::vector<double> decoded = model.codec.decode(x, ref);
  std::vector<double> gap(decoded.begin() + gap_begin, decoded.begin() + gap_begin + gap_size);
  std::copy(gap.begin(), gap.end(), raw.begin() + gap_begin);

  MotionSequence transition(job.prev.skeleton_ptr(), job.prev.fps(), std::move(gap));
  MotionSequence window(job.prev.skeleton_ptr(), job.prev.fps(), std::move(raw));
  MotionSequence assembled = concatenate(concatenate(job.prev, transition), next);
  return StitchResult{std::move(transition), std::move(window), std::move(assembled), before,
                      after};
}

}  // namespace motionsplice::diffusion
