#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "motionsplice/io/motion_file.h"
#include "motionsplice/io/trace_file.h"

namespace motionsplice::cli {

inline constexpr const char* kMotionExtension = ".motion";
inline constexpr const char* kTraceSuffix = ".trace.json";

struct NamedMotion {
  std::string name;  // file stem
  io::MotionFile file;
};

// Every *.motion file directly inside `dir`, sorted by file name.
std::vector<std::filesystem::path> list_motion_files(const std::filesystem::path& dir);

std::vector<NamedMotion> read_motion_dir(const std::filesystem::path& dir);

// Clips with a script; throws InvariantViolation naming the first one
// without.
std::vector<AnnotatedMotion> annotated(const std::vector<NamedMotion>& motions);

std::filesystem::path trace_path(const std::filesystem::path& motion_path);
std::optional<io::TraceFile> read_trace_if_present(const std::filesystem::path& motion_path);

// Creates `dir` (and parents) if missing.
void ensure_dir(const std::filesystem::path& dir);

// "prefix_0007" with at least four digits, wide enough for `count` names.
std::string numbered_name(const std::string& prefix, std::size_t index, std::size_t count);

}  // namespace motionsplice::cli
