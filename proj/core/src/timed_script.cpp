#include "motionsplice/timed_script.h"

#include "motionsplice/error.h"

namespace motionsplice {

TimedScript::TimedScript(std::vector<ScriptSegment> segments) : segments_(std::move(segments)) {
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const ScriptSegment& s = segments_[k];
    if (k == 0 && s.start_frame != 0) {
      throw InvariantViolation("segment 0 must start at frame 0, starts at " +
                               std::to_string(s.start_frame));
    }
    if (s.end_frame <= s.start_frame) {
      throw InvariantViolation("segment " + std::to_string(k) + " is empty or reversed: [" +
                               std::to_string(s.start_frame) + ", " +
                               std::to_string(s.end_frame) + ")");
    }
    if (k > 0) {
      const ScriptSegment& prev = segments_[k - 1];
      if (s.start_frame != prev.end_frame) {
        const char* what = s.start_frame < prev.end_frame ? "overlap" : "leave a gap";
        throw InvariantViolation("segments " + std::to_string(k - 1) + " and " +
                                 std::to_string(k) + " " + what + ": end " +
                                 std::to_string(prev.end_frame) + " vs start " +
                                 std::to_string(s.start_frame));
      }
    }
  }
}

TimedScript TimedScript::single(std::string text, std::size_t frames) {
  return TimedScript({ScriptSegment{std::move(text), 0, frames}});
}

std::size_t TimedScript::total_frames() const noexcept {
  return segments_.empty() ? 0 : segments_.back().end_frame;
}

std::vector<std::size_t> TimedScript::markers() const {
  std::vector<std::size_t> out;
  out.reserve(segments_.size());
  for (const auto& s : segments_) {
    out.push_back(s.end_frame);
  }
  return out;
}

std::string TimedScript::timestamped_text() const {
  std::string out;
  for (const auto& s : segments_) {
    if (!out.empty()) {
      out += ' ';
    }
    out += s.text;
    out += " <" + std::to_string(s.end_frame) + ">";
  }
  return out;
}

AnnotatedMotion::AnnotatedMotion(MotionSequence motion, TimedScript script)
    : motion_(std::move(motion)), script_(std::move(script)) {
  if (script_.empty()) {
    throw InvariantViolation("annotated motion requires a non-empty script");
  }
  if (script_.total_frames() != motion_.frame_count()) {
    throw InvariantViolation("script covers " + std::to_string(script_.total_frames()) +
                             " frames but motion has " +
                             std::to_string(motion_.frame_count()));
  }
}

}  // namespace motionsplice
