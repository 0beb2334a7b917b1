#include "motionsplice/diffusion/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "motionsplice/error.h"

namespace motionsplice::diffusion {
namespace {

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      out_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
    }
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      out_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
    }
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(std::string_view s) { out_.append(s); }
  void vec(const Eigen::VectorXd& v) {
    u64(static_cast<std::uint64_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      f64(v[i]);
    }
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::uint32_t u32() {
    need(4, "u32");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8, "u64");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
    }
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string_view bytes(std::size_t n, const char* what) {
    need(n, what);
    const auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  Eigen::VectorXd vec(const char* what) {
    const std::uint64_t n = u64();
    if (n > (in_.size() - pos_) / 8) {
      fail(std::string(what) + " length exceeds the remaining data");
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      v[i] = f64();
    }
    return v;
  }
  std::size_t position() const noexcept { return pos_; }
  bool done() const noexcept { return pos_ == in_.size(); }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(0, pos_, "checkpoint: " + message);
  }

 private:
  void need(std::size_t n, const char* what) const {
    if (in_.size() - pos_ < n) {
      fail(std::string("truncated while reading ") + what);
    }
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_checkpoint(const StitcherModel& model) {
  const DenoiserDims& d = model.denoiser.dims();
  Writer w;
  w.bytes(std::string_view(kCheckpointMagic, sizeof(kCheckpointMagic)));
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(model.schedule.steps()));
  w.f64(model.schedule.beta_start());
  w.f64(model.schedule.beta_end());
  for (const std::size_t v : {d.frames, d.joints, d.time_dim, d.cond_dim, d.hidden, d.vocab_size}) {
    w.u32(static_cast<std::uint32_t>(v));
  }
  const OutputScaling& scaling = model.denoiser.scaling();
  if (!scaling.empty() &&
      !(scaling ==
        OutputScaling::gaussian(model.schedule, scaling.prior_scale, scaling.interpolate))) {
    throw InvalidArgument("checkpoint can only store a Gaussian output scaling of its schedule");
  }
  w.f64(scaling.empty() ? 0.0 : scaling.prior_scale);
  w.u32(scaling.interpolate ? 1 : 0);
  for (const auto& label : model.vocabulary) {
    w.u32(static_cast<std::uint32_t>(label.size()));
    w.bytes(label);
  }
  w.u32(static_cast<std::uint32_t>(model.codec.root()));
  w.vec(model.codec.mean());
  w.vec(model.codec.scale());
  w.vec(model.denoiser.parameters());
  return w.take();
}

StitcherModel parse_checkpoint(std::string_view bytes) {
  Reader r(bytes);
  if (r.bytes(sizeof(kCheckpointMagic), "magic") !=
      std::string_view(kCheckpointMagic, sizeof(kCheckpointMagic))) {
    throw ParseError(0, 0, "checkpoint: bad magic");
  }
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    r.fail("unsupported version " + std::to_string(version));
  }
  const std::uint32_t steps = r.u32();
  const double beta_start = r.f64();
  const double beta_end = r.f64();
  DenoiserDims d;
  d.frames = r.u32();
  d.joints = r.u32();
  d.time_dim = r.u32();
  d.cond_dim = r.u32();
  d.hidden = r.u32();
  d.vocab_size = r.u32();
  const std::size_t prior_at = r.position();
  const double prior_scale = r.f64();
  if (!(prior_scale >= 0.0) || !std::isfinite(prior_scale)) {
    throw ParseError(0, prior_at, "checkpoint: invalid prior scale");
  }
  const std::size_t interp_at = r.position();
  const std::uint32_t interpolate = r.u32();
  if (interpolate > 1 || (interpolate == 1 && prior_scale == 0.0)) {
    throw ParseError(0, interp_at, "checkpoint: invalid interpolation flag");
  }
  std::vector<std::string> vocabulary;
  for (std::size_t i = 0; i < d.vocab_size; ++i) {
    const std::uint32_t len = r.u32();
    vocabulary.emplace_back(r.bytes(len, "vocabulary label"));
  }
  const std::uint32_t codec_root = r.u32();
  Eigen::VectorXd mean = r.vec("codec mean");
  Eigen::VectorXd scale = r.vec("codec scale");
  Eigen::VectorXd params = r.vec("parameters");
  if (!r.done()) {
    r.fail("trailing bytes after parameters");
  }
  try {
    DiffusionSchedule schedule(steps, beta_start, beta_end);
    WindowCodec codec(d.frames, d.joints, codec_root, std::move(mean), std::move(scale));
    OutputScaling scaling = prior_scale > 0.0
                                ? OutputScaling::gaussian(schedule, prior_scale, interpolate == 1)
                                : OutputScaling{};
    Denoiser denoiser(d, std::move(params), std::move(scaling));
    return StitcherModel{std::move(schedule), std::move(denoiser), std::move(vocabulary),
                         std::move(codec)};
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(0, r.position(), std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const StitcherModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot open " + path.string() + " for writing");
  }
  const std::string bytes = serialize_checkpoint(model);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error("failed writing " + path.string());
  }
}

StitcherModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open checkpoint " + path.string());
  }
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_checkpoint(bytes);
}

}  // namespace motionsplice::diffusion
