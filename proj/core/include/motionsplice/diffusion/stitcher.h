#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "motionsplice/diffusion/denoiser.h"
#include "motionsplice/diffusion/schedule.h"
#include "motionsplice/diffusion/trainer.h"
#include "motionsplice/motion.h"
#include "motionsplice/timed_script.h"

namespace motionsplice::diffusion {

// Maps a window of global joint positions to model space and back. The root
// is shifted on the ground plane so the midpoint of its first- and last-frame
// position lies at the origin (both frames are known at inference); every
// other joint is taken relative to its frame's root. Each joint coordinate is
// then standardized with statistics pooled over frames and windows. The map is
// the same for every frame, so blending encoded frames blends the motion.
class WindowCodec {
 public:
  WindowCodec(std::size_t frames, std::size_t joints, std::size_t root, Eigen::VectorXd mean,
              Eigen::VectorXd scale);

  // Statistics over `windows`, all of the same frame count: one mean and
  // scale per joint coordinate, repeated for every frame. Scales are floored
  // at kMinScale.
  static WindowCodec fit(std::span<const MotionSequence> windows);

  static constexpr double kMinScale = 1e-2;

  std::size_t frames() const noexcept { return frames_; }
  std::size_t joints() const noexcept { return joints_; }
  std::size_t root() const noexcept { return root_; }
  const Eigen::VectorXd& mean() const noexcept { return mean_; }
  const Eigen::VectorXd& scale() const noexcept { return scale_; }

  // Ground-plane shift for a raw window (frames * joints * 3 values).
  Vec3 reference(std::span<const double> raw) const;
  Eigen::VectorXd encode(std::span<const double> raw, const Vec3& reference) const;
  std::vector<double> decode(const Eigen::VectorXd& encoded, const Vec3& reference) const;

 private:
  std::size_t frames_;
  std::size_t joints_;
  std::size_t root_;
  Eigen::VectorXd mean_;
  Eigen::VectorXd scale_;
};

// Everything needed to run the stitcher; this is what a checkpoint stores.
struct StitcherModel {
  DiffusionSchedule schedule;
  Denoiser denoiser;
  std::vector<std::string> vocabulary;
  WindowCodec codec;

  std::size_t window_frames() const noexcept { return denoiser.dims().frames; }
  // Throws InvalidArgument for a label outside the vocabulary.
  Condition token(std::string_view label) const;
};

struct MotionWindow {
  MotionSequence frames;
  Condition condition;
};

struct FitResult {
  StitcherModel model;
  std::vector<double> epoch_loss;
};

// Fits the codec on `windows`, encodes them and runs train_stitcher.
FitResult fit_stitcher(std::span<const MotionWindow> windows,
                       std::vector<std::string> vocabulary, const DiffusionSchedule& sched,
                       const TrainConfig& cfg);

// `count` windows of `frames` consecutive frames cut at uniformly random
// offsets from uniformly chosen clips long enough to hold them, labelled with
// condition_for(clip script).
std::vector<MotionWindow> sample_windows(std::span<const AnnotatedMotion> clips,
                                         std::size_t frames, std::size_t count,
                                         const std::vector<std::string>& vocabulary,
                                         std::mt19937_64& rng);

struct StitchJob {
  MotionSequence prev;
  MotionSequence next;
  Condition condition;
  std::size_t transition_len = 5;
  double guidance_scale = 2.5;
};

enum class ClampMode {
  // Known frames are re-noised to the current level after every step.
  kRenoise,
  // Known frames are held at their clean values throughout.
  kClean,
};

// State after the clamp that ends one reverse step.
struct StitchStep {
  std::size_t level;                   // noise level of `window` (t - 1)
  const Eigen::VectorXd& window;       // model-space window after the clamp
  const Eigen::VectorXd& known;        // model-space clean known frames
  const Eigen::VectorXd& clamp_noise;  // noise used to re-noise known frames
  const FrameMask& mask;
};

struct StitchOptions {
  ClampMode clamp = ClampMode::kRenoise;
  // Root-align `next` to the end of `prev` before stitching.
  bool align_next = true;
  std::function<void(const StitchStep&)> observer;
};

struct StitchResult {
  MotionSequence transition;  // transition_len generated frames
  MotionSequence window;      // [prev tail | transition | next head]
  MotionSequence assembled;   // prev ++ transition ++ next (aligned)
  std::size_t context_before = 0;
  std::size_t context_after = 0;
};

// Inpaints `transition_len` frames between the last frames of job.prev and the
// first frames of job.next. The model window of W frames holds
// context_before = (W - L) / 2 frames of prev, the L-frame gap, and
// context_after = W - L - context_before frames of next. The gap starts as
// N(0, I); every step t = T..1 predicts noise with cfg_predict, takes
// reverse_step, then clamps the known frames. Unmasked frames of the result
// window are copies of the inputs.
// Throws ShapeMismatch when the clips do not fit the model window.
StitchResult stitch(const StitchJob& job, const StitcherModel& model, std::mt19937_64& rng,
                    const StitchOptions& options = {});

}  // namespace motionsplice::diffusion
