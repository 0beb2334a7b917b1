#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "motionsplice/motion.h"

namespace motionsplice {

// One text description covering frames [start_frame, end_frame).
struct ScriptSegment {
  std::string text;
  std::size_t start_frame = 0;
  std::size_t end_frame = 0;

  bool operator==(const ScriptSegment&) const = default;
};

// Ordered, contiguous text segments; the pairing of a long description with
// the frame ranges of its parts. Construction rejects (never repairs) scripts
// that do not start at frame 0, have empty segments, or leave gaps/overlaps.
class TimedScript {
 public:
  TimedScript() = default;
  explicit TimedScript(std::vector<ScriptSegment> segments);

  static TimedScript single(std::string text, std::size_t frames);

  const std::vector<ScriptSegment>& segments() const noexcept { return segments_; }
  bool empty() const noexcept { return segments_.empty(); }
  std::size_t size() const noexcept { return segments_.size(); }

  // end_frame of the last segment, 0 for an empty script.
  std::size_t total_frames() const noexcept;

  // Cumulative frame counts at each segment boundary (the end frames).
  std::vector<std::size_t> markers() const;

  // Segment texts joined with their end-frame timestamps, e.g.
  // "walk forward <120> wave <200>".
  std::string timestamped_text() const;

  bool operator==(const TimedScript&) const = default;

 private:
  std::vector<ScriptSegment> segments_;
};

// A motion paired with its script. The script must be non-empty and cover
// exactly motion.frame_count() frames.
class AnnotatedMotion {
 public:
  AnnotatedMotion(MotionSequence motion, TimedScript script);

  const MotionSequence& motion() const noexcept { return motion_; }
  const TimedScript& script() const noexcept { return script_; }
  std::size_t frame_count() const noexcept { return motion_.frame_count(); }

  bool operator==(const AnnotatedMotion&) const = default;

 private:
  MotionSequence motion_;
  TimedScript script_;
};

}  // namespace motionsplice
