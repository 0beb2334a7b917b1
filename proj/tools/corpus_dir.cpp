#include "corpus_dir.h"

#include <algorithm>

#include "motionsplice/error.h"

namespace motionsplice::cli {

namespace fs = std::filesystem;

std::vector<fs::path> list_motion_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error("not a directory: " + dir.string());
  }
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == kMotionExtension) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return out;
}

std::vector<NamedMotion> read_motion_dir(const fs::path& dir) {
  std::vector<NamedMotion> out;
  for (const auto& path : list_motion_files(dir)) {
    out.push_back({path.stem().string(), io::read_motion_file(path)});
  }
  return out;
}

std::vector<AnnotatedMotion> annotated(const std::vector<NamedMotion>& motions) {
  std::vector<AnnotatedMotion> out;
  out.reserve(motions.size());
  for (const auto& m : motions) {
    if (!m.file.script) {
      throw InvariantViolation(m.name + ": motion has no script");
    }
    out.push_back(m.file.annotated());
  }
  return out;
}

fs::path trace_path(const fs::path& motion_path) {
  fs::path p = motion_path;
  p.replace_extension(kTraceSuffix);
  return p;
}

std::optional<io::TraceFile> read_trace_if_present(const fs::path& motion_path) {
  const fs::path p = trace_path(motion_path);
  if (!fs::exists(p)) {
    return std::nullopt;
  }
  return io::read_trace_file(p);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error("cannot create directory " + dir.string() + ": " + ec.message());
  }
}

std::string numbered_name(const std::string& prefix, std::size_t index, std::size_t count) {
  std::size_t digits = 4;
  for (std::size_t n = count; n >= 10000; n /= 10) {
    ++digits;
  }
  std::string num = std::to_string(index);
  if (num.size() < digits) {
    num.insert(0, digits - num.size(), '0');
  }
  return prefix + "_" + num;
}

}  // namespace motionsplice::cli
