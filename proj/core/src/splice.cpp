#include "motionsplice/splice.h"

#include <algorithm>
#include <random>
#include <string>
#include <thread>

#include "motionsplice/error.h"
#include "motionsplice/geometry.h"

namespace motionsplice {

void SpliceConfig::validate() const {
  if (tail_frames == 0 || head_frames == 0) {
    throw InvalidArgument("tail_frames and head_frames must be positive");
  }
  if (window_frames() < 2) {
    throw InvalidArgument("transition window needs at least two frames");
  }
  if (!(facing_cos_threshold >= -1.0 && facing_cos_threshold <= 1.0)) {
    throw InvalidArgument("facing_cos_threshold must lie in [-1, 1]");
  }
  if (max_output_frames && *max_output_frames < min_output_frames) {
    throw InvalidArgument("max_output_frames (" + std::to_string(*max_output_frames) +
                          ") is below min_output_frames (" + std::to_string(min_output_frames) +
                          ")");
  }
}

std::vector<AnnotatedMotion> filter_min_length(std::span<const AnnotatedMotion> corpus,
                                               const SpliceConfig& cfg) {
  std::vector<AnnotatedMotion> out;
  for (const auto& clip : corpus) {
    if (clip.frame_count() >= cfg.min_clip_frames) {
      out.push_back(clip);
    }
  }
  return out;
}

Vec3 facing(const MotionSequence& seq, std::size_t frame, FacingMode mode) {
  return mode == FacingMode::kHorizontal ? facing_direction_horizontal(seq, frame)
                                         : facing_direction(seq, frame);
}

bool compatible(const MotionSequence& prev, const MotionSequence& next,
                const SpliceConfig& cfg) {
  const Vec3 end = facing(prev, prev.frame_count() - 1, cfg.facing_mode);
  const Vec3 start = facing(next, 0, cfg.facing_mode);
  return end.dot(start) >= cfg.facing_cos_threshold;
}

MotionSequence root_align(const MotionSequence& prev, const MotionSequence& next) {
  if (!(prev.skeleton() == next.skeleton())) {
    throw ShapeMismatch("root_align requires both clips to share a skeleton");
  }
  const Vec3 offset = prev.root(prev.frame_count() - 1) - next.root(0);
  return next.translated(offset);
}

MotionSequence build_transition(const MotionSequence& prev, const MotionSequence& aligned_next,
                                const SpliceConfig& cfg) {
  if (prev.frame_count() < cfg.tail_frames) {
    throw ClipTooShort("previous clip has " + std::to_string(prev.frame_count()) +
                       " frames, transition needs " + std::to_string(cfg.tail_frames));
  }
  if (aligned_next.frame_count() < cfg.head_frames) {
    throw ClipTooShort("next clip has " + std::to_string(aligned_next.frame_count()) +
                       " frames, transition needs " + std::to_string(cfg.head_frames));
  }
  if (!(prev.skeleton() == aligned_next.skeleton())) {
    throw ShapeMismatch("transition requires both clips to share a skeleton");
  }
  const std::size_t w = cfg.window_frames();
  const auto entry = prev.frame(prev.frame_count() - cfg.tail_frames);
  const auto exit = aligned_next.frame(cfg.head_frames - 1);
  const std::size_t stride = prev.stride();

  std::vector<double> out(w * stride);
  const double last = static_cast<double>(w - 1);
  for (std::size_t i = 0; i < w; ++i) {
    const double weight = static_cast<double>(i) / last;
    for (std::size_t k = 0; k < stride; ++k) {
      // Equal anchors stay exact; the blend can be off by an ulp.
      out[i * stride + k] =
          entry[k] == exit[k] ? entry[k] : (1.0 - weight) * entry[k] + weight * exit[k];
    }
  }
  return MotionSequence(prev.skeleton_ptr(), prev.fps(), std::move(out));
}

TimedScript insert_timestamps(const TimedScript& a, const TimedScript& b, std::size_t len_a) {
  std::vector<ScriptSegment> out = a.segments();
  out.reserve(a.size() + b.size());
  for (const auto& s : b.segments()) {
    out.push_back({s.text, s.start_frame + len_a, s.end_frame + len_a});
  }
  return TimedScript(std::move(out));
}

SplicedPair splice_pair(const AnnotatedMotion& prev, const AnnotatedMotion& next,
                        const SpliceConfig& cfg) {
  const MotionSequence& pm = prev.motion();
  const MotionSequence& nm = next.motion();
  if (pm.fps() != nm.fps()) {
    throw ShapeMismatch("cannot splice clips recorded at different fps");
  }
  if (!compatible(pm, nm, cfg)) {
    throw IncompatibleFacing("facing directions at the junction differ beyond cosine " +
                             std::to_string(cfg.facing_cos_threshold));
  }
  const MotionSequence aligned = root_align(pm, nm);
  const MotionSequence window = build_transition(pm, aligned, cfg);

  const std::size_t junction = pm.frame_count() - cfg.tail_frames;
  const std::size_t stride = pm.stride();
  std::vector<double> out;
  out.reserve((pm.frame_count() + nm.frame_count()) * stride);
  const auto prev_data = pm.data();
  out.insert(out.end(), prev_data.begin(),
             prev_data.begin() + static_cast<std::ptrdiff_t>(junction * stride));
  out.insert(out.end(), window.data().begin(), window.data().end());
  const auto next_data = aligned.data();
  out.insert(out.end(),
             next_data.begin() + static_cast<std::ptrdiff_t>(cfg.head_frames * stride),
             next_data.end());

  MotionSequence motion(pm.skeleton_ptr(), pm.fps(), std::move(out));
  TimedScript script = insert_timestamps(prev.script(), next.script(), pm.frame_count());
  return SplicedPair{AnnotatedMotion(std::move(motion), std::move(script)), junction};
}

namespace {

// Uniform index in [0, n) from the chain's own stream.
std::size_t draw_index(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

struct ChainOutcome {
  std::optional<LongSequence> sequence;
  bool exhausted = false;
};

ChainOutcome grow_chain(std::span<const AnnotatedMotion> corpus,
                        const std::vector<std::vector<std::size_t>>& successors,
                        const std::vector<std::size_t>& starts, const SpliceConfig& cfg,
                        std::size_t chain_index) {
  const auto k = static_cast<std::uint64_t>(chain_index);
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.rng_seed >> 32),
                    static_cast<std::uint32_t>(cfg.rng_seed), static_cast<std::uint32_t>(k >> 32),
                    static_cast<std::uint32_t>(k)};
  std::mt19937_64 rng(seq);

  ChainOutcome outcome;
  if (starts.empty()) {
    outcome.exhausted = true;
    return outcome;
  }
  std::size_t current = starts[draw_index(rng, starts.size())];
  AnnotatedMotion chain = corpus[current];
  SpliceTrace trace{{current}, {}, cfg.window_frames()};

  std::vector<std::size_t> candidates;
  while (chain.frame_count() < cfg.min_output_frames) {
    candidates.clear();
    for (std::size_t next : successors[current]) {
      const std::size_t length = chain.frame_count() + corpus[next].frame_count();
      if (!cfg.max_output_frames || length <= *cfg.max_output_frames) {
        candidates.push_back(next);
      }
    }
    if (candidates.empty()) {
      outcome.exhausted = true;
      return outcome;
    }
    current = candidates[draw_index(rng, candidates.size())];
    SplicedPair spliced = splice_pair(chain, corpus[current], cfg);
    trace.source_clips.push_back(current);
    trace.junction_frames.push_back(spliced.junction);
    chain = std::move(spliced.result);
  }
  outcome.sequence = LongSequence{std::move(chain), std::move(trace)};
  return outcome;
}

}  // namespace

AssembleResult assemble_long(std::span<const AnnotatedMotion> corpus, const SpliceConfig& cfg) {
  cfg.validate();
  const std::size_t n = corpus.size();

  // Facing at each clip's first and last frame. Translation does not change
  // facing, so compatibility between the growing chain and a candidate equals
  // compatibility between the chain's last clip and that candidate.
  std::vector<Vec3> first(n);
  std::vector<Vec3> last(n);
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < n; ++i) {
    const MotionSequence& m = corpus[i].motion();
    first[i] = facing(m, 0, cfg.facing_mode);
    last[i] = facing(m, m.frame_count() - 1, cfg.facing_mode);
    const bool fits = !cfg.max_output_frames || m.frame_count() <= *cfg.max_output_frames;
    const bool spliceable = m.frame_count() >= std::max(cfg.tail_frames, cfg.head_frames);
    if (fits && spliceable) {
      starts.push_back(i);
    }
  }
  std::vector<std::vector<std::size_t>> successors(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : starts) {
      if (last[i].dot(first[j]) >= cfg.facing_cos_threshold &&
          corpus[i].motion().fps() == corpus[j].motion().fps()) {
        successors[i].push_back(j);
      }
    }
  }

  std::vector<ChainOutcome> outcomes(cfg.chain_attempts);
  const std::size_t workers = std::clamp<std::size_t>(cfg.threads, 1, cfg.chain_attempts);
  if (workers <= 1) {
    for (std::size_t k = 0; k < cfg.chain_attempts; ++k) {
      outcomes[k] = grow_chain(corpus, successors, starts, cfg, k);
    }
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t k = w; k < cfg.chain_attempts; k += workers) {
              outcomes[k] = grow_chain(corpus, successors, starts, cfg, k);
            }
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) {
        std::rethrow_exception(e);
      }
    }
  }

  AssembleResult result;
  result.attempts = cfg.chain_attempts;
  for (auto& o : outcomes) {
    if (o.sequence) {
      result.sequences.push_back(std::move(*o.sequence));
    } else if (o.exhausted) {
      ++result.exhausted;
    }
  }
  return result;
}

}  // namespace motionsplice
