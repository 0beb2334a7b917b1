#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "motionsplice/splice.h"

namespace motionsplice::io {

// JSON sidecar written next to a spliced sequence. source_names holds the
// file stems of the source clips, parallel to trace.source_clips.
struct TraceFile {
  SpliceTrace trace;
  std::vector<std::string> source_names;

  bool operator==(const TraceFile&) const = default;
};

std::string serialize_trace(const TraceFile& trace);
// Throws ParseError (line/column from the JSON parser, or 0 for schema
// errors).
TraceFile parse_trace(std::string_view text);

TraceFile read_trace_file(const std::filesystem::path& path);
void write_trace_file(const std::filesystem::path& path, const TraceFile& trace);

}  // namespace motionsplice::io
