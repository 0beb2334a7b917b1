#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "motionsplice/motion.h"
#include "motionsplice/timed_script.h"

namespace motionsplice {

enum class FacingMode {
  kHeadNeck,    // neck -> head unit vector
  kHorizontal,  // the same vector projected onto the ground plane
};

struct SpliceConfig {
  std::size_t min_clip_frames = 10;
  double facing_cos_threshold = 0.98;
  FacingMode facing_mode = FacingMode::kHeadNeck;
  // Frames taken from the end of the previous clip / start of the next one.
  // Their sum is the transition window length.
  std::size_t tail_frames = 5;
  std::size_t head_frames = 5;
  std::size_t min_output_frames = 600;
  std::optional<std::size_t> max_output_frames = 935;
  std::uint64_t rng_seed = 0;
  // Number of chains assemble_long tries to grow.
  std::size_t chain_attempts = 100;
  // Worker threads for assemble_long. Output does not depend on this.
  std::size_t threads = 1;

  std::size_t window_frames() const noexcept { return tail_frames + head_frames; }

  // Throws InvalidArgument on inconsistent settings.
  void validate() const;
};

// Provenance of one assembled sequence.
struct SpliceTrace {
  // Corpus indices of the clips in chain order.
  std::vector<std::size_t> source_clips;
  // First frame of each transition window; size() == source_clips.size() - 1.
  std::vector<std::size_t> junction_frames;
  std::size_t window_frames = 0;

  bool operator==(const SpliceTrace&) const = default;
};

// Clips with at least cfg.min_clip_frames frames, in input order.
std::vector<AnnotatedMotion> filter_min_length(std::span<const AnnotatedMotion> corpus,
                                               const SpliceConfig& cfg);

// Facing unit vector according to cfg.facing_mode.
Vec3 facing(const MotionSequence& seq, std::size_t frame, FacingMode mode);

// True iff the cosine between the facing at prev's last frame and next's first
// frame reaches cfg.facing_cos_threshold. Propagates DegenerateDirection.
bool compatible(const MotionSequence& prev, const MotionSequence& next, const SpliceConfig& cfg);

// `next` translated so that its first-frame root equals prev's last-frame root.
MotionSequence root_align(const MotionSequence& prev, const MotionSequence& next);

// The linear transition window of tail+head frames. Frame i blends the window
// entry pose I_s = prev[F - tail] into the exit pose I_e = aligned_next[head - 1]
// with weight i / (W - 1). Throws ClipTooShort.
MotionSequence build_transition(const MotionSequence& prev, const MotionSequence& aligned_next,
                                const SpliceConfig& cfg);

// Script of `b` shifted by len_a frames and appended to `a`.
TimedScript insert_timestamps(const TimedScript& a, const TimedScript& b, std::size_t len_a);

struct SplicedPair {
  AnnotatedMotion result;
  // First frame of the transition window in `result`.
  std::size_t junction = 0;
};

// prev[0, F-tail) ++ transition ++ aligned_next[head, F). The window replaces
// the frames it consumed, so the result has prev.F + next.F frames.
// Throws IncompatibleFacing when compatible() fails.
SplicedPair splice_pair(const AnnotatedMotion& prev, const AnnotatedMotion& next,
                        const SpliceConfig& cfg);

struct LongSequence {
  AnnotatedMotion motion;
  SpliceTrace trace;
};

struct AssembleResult {
  std::vector<LongSequence> sequences;
  // Chains discarded because no compatible continuation existed before the
  // minimum length was reached.
  std::size_t exhausted = 0;
  std::size_t attempts = 0;
};

// Grows cfg.chain_attempts chains. Chain k draws its random stream from
// (cfg.rng_seed, k): a uniformly chosen start clip, then repeatedly a uniformly
// chosen compatible clip that keeps the length within max_output_frames, until
// the length reaches min_output_frames. The corpus should already have been
// passed through filter_min_length. Clips may be reused across and within
// chains. Output order follows chain index.
AssembleResult assemble_long(std::span<const AnnotatedMotion> corpus, const SpliceConfig& cfg);

}  // namespace motionsplice
