#include "motionsplice/io/motion_file.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <vector>

#include "motionsplice/error.h"

namespace motionsplice::io {
namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

std::string escape(std::string_view text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        out += c;
    }
  }
  return out;
}

bool is_space(char c) { return c == ' ' || c == '\t'; }

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

// One input line split on blanks, with positions kept for diagnostics.
class Line {
 public:
  Line(std::string_view text, std::size_t number) : text_(text), number_(number) {
    std::size_t i = 0;
    while (i < text_.size()) {
      while (i < text_.size() && is_space(text_[i])) {
        ++i;
      }
      const std::size_t start = i;
      while (i < text_.size() && !is_space(text_[i])) {
        ++i;
      }
      if (i > start) {
        tokens_.push_back({text_.substr(start, i - start), start + 1});
      }
    }
  }

  std::size_t number() const noexcept { return number_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  const Token& operator[](std::size_t i) const { return tokens_.at(i); }
  std::string_view text() const noexcept { return text_; }
  std::size_t end_column() const noexcept { return text_.size() + 1; }

  [[noreturn]] void fail(std::size_t column, const std::string& message) const {
    throw ParseError(number_, column, message);
  }

  const Token& token(std::size_t i, const char* what) const {
    if (i >= tokens_.size()) {
      fail(end_column(), std::string("expected ") + what);
    }
    return tokens_[i];
  }

  void expect_keyword(std::string_view keyword) const {
    const Token& t = token(0, std::string(keyword).c_str());
    if (t.text != keyword) {
      fail(t.column,
           "expected '" + std::string(keyword) + "', found '" + std::string(t.text) + "'");
    }
  }

  void expect_count(std::size_t n) const {
    if (tokens_.size() > n) {
      fail(tokens_[n].column, "unexpected trailing token '" + std::string(tokens_[n].text) + "'");
    }
    if (tokens_.size() < n) {
      fail(end_column(), "expected " + std::to_string(n) + " fields, found " +
                             std::to_string(tokens_.size()));
    }
  }

  double number_at(std::size_t i) const {
    const Token& t = token(i, "a number");
    double v = 0.0;
    const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size()) {
      fail(t.column, "invalid number '" + std::string(t.text) + "'");
    }
    if (!std::isfinite(v)) {
      fail(t.column, "non-finite number '" + std::string(t.text) + "'");
    }
    return v;
  }

  long long integer_at(std::size_t i, long long min_value) const {
    const Token& t = token(i, "an integer");
    long long v = 0;
    const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size()) {
      fail(t.column, "invalid integer '" + std::string(t.text) + "'");
    }
    if (v < min_value) {
      fail(t.column, "integer " + std::to_string(v) + " below " + std::to_string(min_value));
    }
    return v;
  }

 private:
  std::string_view text_;
  std::size_t number_;
  std::vector<Token> tokens_;
};

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  Line next(const char* expecting) {
    if (pos_ >= text_.size()) {
      throw ParseError(line_ + 1, 1, std::string("unexpected end of file, expected ") + expecting);
    }
    const std::size_t end = text_.find('\n', pos_);
    const std::size_t stop = end == std::string_view::npos ? text_.size() : end;
    std::string_view line = text_.substr(pos_, stop - pos_);
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    pos_ = end == std::string_view::npos ? text_.size() : end + 1;
    return Line(line, ++line_);
  }

  bool at_end() const noexcept { return pos_ >= text_.size(); }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

std::string unescape(std::string_view text, const Line& line, std::size_t column) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\') {
      out += text[i];
      continue;
    }
    if (i + 1 >= text.size()) {
      line.fail(column + i, "dangling escape");
    }
    switch (text[++i]) {
      case '\\':
        out += '\\';
        break;
      case 'n':
        out += '\n';
        break;
      case 'r':
        out += '\r';
        break;
      default:
        line.fail(column + i - 1, "unknown escape '\\" + std::string(1, text[i]) + "'");
    }
  }
  return out;
}

}  // namespace

AnnotatedMotion MotionFile::annotated() const {
  if (!script) {
    throw InvariantViolation("motion file has no script block");
  }
  return AnnotatedMotion(motion, *script);
}

std::string serialize_motion(const MotionFile& file) {
  const MotionSequence& m = file.motion;
  const Skeleton& sk = m.skeleton();
  std::string out;
  out += kMotionFileHeader;
  out += ' ' + std::to_string(kMotionFileVersion) + '\n';
  out += "skeleton " + std::to_string(sk.joint_count()) + '\n';
  for (std::size_t j = 0; j < sk.joint_count(); ++j) {
    const std::string& name = sk.joint_names()[j];
    if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos) {
      throw InvalidArgument("joint name '" + name + "' is empty or contains whitespace");
    }
    out += "joint " + name + ' ' + std::to_string(sk.parent(j)) + '\n';
  }
  const SpecialJoints& s = sk.special();
  out += "special " + std::to_string(s.root) + ' ' + std::to_string(s.neck) + ' ' +
         std::to_string(s.head) + ' ' + std::to_string(s.left_foot) + ' ' +
         std::to_string(s.right_foot) + '\n';
  out += "fps ";
  append_double(out, m.fps());
  out += '\n';
  out += "frames " + std::to_string(m.frame_count()) + '\n';
  for (std::size_t f = 0; f < m.frame_count(); ++f) {
    const auto row = m.frame(f);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0) {
        out += ' ';
      }
      append_double(out, row[k]);
    }
    out += '\n';
  }
  if (file.script) {
    out += "script " + std::to_string(file.script->size()) + '\n';
    for (const auto& seg : file.script->segments()) {
      out += "segment " + std::to_string(seg.start_frame) + ' ' + std::to_string(seg.end_frame) +
             ' ' + escape(seg.text) + '\n';
    }
  }
  out += "end\n";
  return out;
}

MotionFile parse_motion(std::string_view text) {
  LineReader reader(text);

  {
    const Line header = reader.next("header");
    header.expect_keyword(kMotionFileHeader);
    header.expect_count(2);
    const long long version = header.integer_at(1, 0);
    if (version != kMotionFileVersion) {
      header.fail(header[1].column, "unsupported format version " + std::to_string(version));
    }
  }

  const Line skel = reader.next("skeleton block");
  skel.expect_keyword("skeleton");
  skel.expect_count(2);
  const auto joints = static_cast<std::size_t>(skel.integer_at(1, 1));
  std::vector<std::string> names;
  std::vector<int> parents;
  for (std::size_t j = 0; j < joints; ++j) {
    const Line jl = reader.next("joint line");
    jl.expect_keyword("joint");
    jl.expect_count(3);
    names.emplace_back(jl[1].text);
    parents.push_back(static_cast<int>(jl.integer_at(2, -1)));
  }
  const Line special_line = reader.next("special joints");
  special_line.expect_keyword("special");
  special_line.expect_count(6);
  SpecialJoints special;
  special.root = static_cast<std::size_t>(special_line.integer_at(1, 0));
  special.neck = static_cast<std::size_t>(special_line.integer_at(2, 0));
  special.head = static_cast<std::size_t>(special_line.integer_at(3, 0));
  special.left_foot = static_cast<std::size_t>(special_line.integer_at(4, 0));
  special.right_foot = static_cast<std::size_t>(special_line.integer_at(5, 0));
  std::shared_ptr<const Skeleton> skeleton;
  try {
    skeleton = std::make_shared<const Skeleton>(std::move(names), std::move(parents), special);
  } catch (const InvariantViolation& e) {
    special_line.fail(1, std::string("invalid skeleton: ") + e.what());
  }

  const Line fps_line = reader.next("fps");
  fps_line.expect_keyword("fps");
  fps_line.expect_count(2);
  const double fps = fps_line.number_at(1);
  if (!(fps > 0.0)) {
    fps_line.fail(fps_line[1].column, "fps must be positive");
  }

  const Line frames_line = reader.next("frame count");
  frames_line.expect_keyword("frames");
  frames_line.expect_count(2);
  const auto frames = static_cast<std::size_t>(frames_line.integer_at(1, 1));

  const std::size_t stride = joints * 3;
  std::vector<double> data;
  data.reserve(frames * stride);
  for (std::size_t f = 0; f < frames; ++f) {
    const Line row = reader.next("frame row");
    if (row.size() != stride) {
      if (row.size() < stride) {
        row.fail(row.end_column(), "frame " + std::to_string(f) + " has " +
                                       std::to_string(row.size()) + " values, expected " +
                                       std::to_string(stride));
      }
      row.fail(row[stride].column, "frame " + std::to_string(f) + " has more than " +
                                       std::to_string(stride) + " values");
    }
    for (std::size_t k = 0; k < stride; ++k) {
      data.push_back(row.number_at(k));
    }
  }
  MotionSequence motion(skeleton, fps, std::move(data));

  std::optional<TimedScript> script;
  Line tail = reader.next("'script' or 'end'");
  if (tail.size() > 0 && tail[0].text == "script") {
    tail.expect_count(2);
    const auto count = static_cast<std::size_t>(tail.integer_at(1, 0));
    std::vector<ScriptSegment> segments;
    std::vector<std::size_t> segment_lines;
    for (std::size_t k = 0; k < count; ++k) {
      const Line sl = reader.next("segment line");
      sl.expect_keyword("segment");
      const auto start = static_cast<std::size_t>(sl.integer_at(1, 0));
      const auto end = static_cast<std::size_t>(sl.integer_at(2, 0));
      // Text is everything after the single blank following the end frame.
      const Token& end_tok = sl[2];
      const std::size_t text_col = end_tok.column + end_tok.text.size() + 1;
      std::string_view raw;
      if (text_col - 1 < sl.text().size()) {
        raw = sl.text().substr(text_col - 1);
      }
      segments.push_back({unescape(raw, sl, text_col), start, end});
      segment_lines.push_back(sl.number());
    }
    try {
      script = TimedScript(std::move(segments));
    } catch (const InvariantViolation& e) {
      // Point at the last segment line; the message names the offending pair.
      const std::size_t line = segment_lines.empty() ? tail.number() : segment_lines.back();
      throw ParseError(line, 1, std::string("invalid script: ") + e.what());
    }
    if (!script->empty() && script->total_frames() != frames) {
      const std::size_t line = segment_lines.back();
      throw ParseError(line, 1, "script covers " + std::to_string(script->total_frames()) +
                                    " frames but the motion has " + std::to_string(frames));
    }
    tail = reader.next("'end'");
  }
  tail.expect_keyword("end");
  tail.expect_count(1);
  while (!reader.at_end()) {
    const Line extra = reader.next("nothing");
    if (extra.size() > 0) {
      extra.fail(extra[0].column, "content after 'end'");
    }
  }
  return MotionFile{std::move(motion), std::move(script)};
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot open " + path.string() + " for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw Error("failed writing " + path.string());
  }
}

MotionFile read_motion_file(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return parse_motion(text);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), path.string() + ": " + e.message());
  }
}

void write_motion_file(const std::filesystem::path& path, const MotionFile& file) {
  write_text(path, serialize_motion(file));
}

}  // namespace motionsplice::io
