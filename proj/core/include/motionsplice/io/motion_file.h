#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "motionsplice/motion.h"
#include "motionsplice/timed_script.h"

namespace motionsplice::io {

inline constexpr std::string_view kMotionFileHeader = "motionsplice-motion";
inline constexpr int kMotionFileVersion = 1;

// Contents of one .motion file: a sequence with its skeleton and an optional
// script. See docs/motion_format.md.
struct MotionFile {
  MotionSequence motion;
  std::optional<TimedScript> script;

  static MotionFile from(const AnnotatedMotion& clip) { return {clip.motion(), clip.script()}; }
  // Throws InvariantViolation when the script is missing or does not cover
  // the motion.
  AnnotatedMotion annotated() const;

  bool operator==(const MotionFile&) const = default;
};

// Line-oriented text; doubles use shortest round-trip formatting so
// parse(serialize(x)) reproduces every coordinate bit for bit. Throws
// InvalidArgument for joint names containing whitespace.
std::string serialize_motion(const MotionFile& file);

// Throws ParseError with the 1-based line and column of the first problem,
// including non-finite numbers and skeleton/script invariant violations.
MotionFile parse_motion(std::string_view text);

MotionFile read_motion_file(const std::filesystem::path& path);
void write_motion_file(const std::filesystem::path& path, const MotionFile& file);

// Reads the whole file; throws Error if it cannot be opened.
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace motionsplice::io
