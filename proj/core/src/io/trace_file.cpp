#include "motionsplice/io/trace_file.h"

#include <json.hpp>

#include "motionsplice/error.h"
#include "motionsplice/io/motion_file.h"

namespace motionsplice::io {

using nlohmann::json;

std::string serialize_trace(const TraceFile& trace) {
  if (!trace.source_names.empty() && trace.source_names.size() != trace.trace.source_clips.size()) {
    throw InvalidArgument("trace: source_names and source_clips differ in length");
  }
  json doc;
  doc["format"] = "motionsplice-trace";
  doc["version"] = 1;
  doc["source_clips"] = trace.trace.source_clips;
  doc["source_names"] = trace.source_names;
  doc["junction_frames"] = trace.trace.junction_frames;
  doc["window_frames"] = trace.trace.window_frames;
  return doc.dump(2) + '\n';
}

TraceFile parse_trace(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, e.byte, std::string("trace: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "motionsplice-trace") {
      throw ParseError(0, 0, "trace: unexpected format tag");
    }
    if (doc.at("version").get<int>() != 1) {
      throw ParseError(0, 0, "trace: unsupported version");
    }
    TraceFile out;
    out.trace.source_clips = doc.at("source_clips").get<std::vector<std::size_t>>();
    out.source_names = doc.at("source_names").get<std::vector<std::string>>();
    out.trace.junction_frames = doc.at("junction_frames").get<std::vector<std::size_t>>();
    out.trace.window_frames = doc.at("window_frames").get<std::size_t>();
    if (!out.source_names.empty() &&
        out.source_names.size() != out.trace.source_clips.size()) {
      throw ParseError(0, 0, "trace: source_names and source_clips differ in length");
    }
    if (!out.trace.source_clips.empty() &&
        out.trace.junction_frames.size() + 1 != out.trace.source_clips.size()) {
      throw ParseError(0, 0, "trace: expected one junction per adjacent clip pair");
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(0, 0, std::string("trace: ") + e.what());
  }
}

TraceFile read_trace_file(const std::filesystem::path& path) {
  return parse_trace(read_text(path));
}

void write_trace_file(const std::filesystem::path& path, const TraceFile& trace) {
  write_text(path, serialize_trace(trace));
}

}  // namespace motionsplice::io
