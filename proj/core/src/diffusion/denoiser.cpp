#include "motionsplice/diffusion/denoiser.h"

#include <cmath>
#include <string>
#include <vector>

#include "motionsplice/error.h"

namespace motionsplice::diffusion {

std::size_t DenoiserDims::parameter_count() const noexcept {
  const std::size_t in = input_size();
  const std::size_t out = sample_size();
  return hidden * in + hidden + hidden * hidden + hidden + out * hidden + out +
         cond_dim * (vocab_size + 1);
}

struct Denoiser::Layout {
  std::size_t w1, b1, w2, b2, w3, b3, emb;

  explicit Layout(const DenoiserDims& d) {
    const std::size_t in = d.input_size();
    const std::size_t h = d.hidden;
    w1 = 0;
    b1 = w1 + h * in;
    w2 = b1 + h;
    b2 = w2 + h * h;
    w3 = b2 + h;
    b3 = w3 + d.sample_size() * h;
    emb = b3 + d.sample_size();
  }
};

namespace {

using ConstMap = Eigen::Map<const Eigen::MatrixXd>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;
using Map = Eigen::Map<Eigen::MatrixXd>;
using VecMap = Eigen::Map<Eigen::VectorXd>;

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
  return (1.0 + (-z.array()).exp()).inverse().matrix();
}

}  // namespace

Eigen::VectorXd time_embedding(std::size_t t, std::size_t dim) {
  if (dim % 2 != 0) {
    throw InvalidArgument("time embedding dimension must be even");
  }
  const std::size_t half = dim / 2;
  Eigen::VectorXd out(static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < half; ++k) {
    const double freq =
        std::exp(-std::log(10000.0) * static_cast<double>(k) / static_cast<double>(half));
    const double arg = static_cast<double>(t) * freq;
    out[static_cast<Eigen::Index>(k)] = std::sin(arg);
    out[static_cast<Eigen::Index>(half + k)] = std::cos(arg);
  }
  return out;
}

Denoiser::Denoiser(DenoiserDims dims, Eigen::VectorXd parameters, OutputScaling scaling)
    : dims_(dims), params_(std::move(parameters)), scaling_(std::move(scaling)) {
  if (dims_.frames == 0 || dims_.joints == 0 || dims_.hidden == 0) {
    throw InvalidArgument("denoiser dimensions must be positive");
  }
  if (dims_.time_dim % 2 != 0) {
    throw InvalidArgument("time embedding dimension must be even");
  }
  if (static_cast<std::size_t>(params_.size()) != dims_.parameter_count()) {
    throw ShapeMismatch("denoiser expects " + std::to_string(dims_.parameter_count()) +
                        " parameters, got " + std::to_string(params_.size()));
  }
  if (scaling_.skip.size() != scaling_.out.size()) {
    throw ShapeMismatch("output scaling tables differ in length");
  }
}

OutputScaling OutputScaling::gaussian(const DiffusionSchedule& sched, double prior_scale,
                                      bool interpolate) {
  if (!(prior_scale > 0.0) || !std::isfinite(prior_scale)) {
    throw InvalidArgument("prior scale must be positive and finite");
  }
  OutputScaling s;
  s.prior_scale = prior_scale;
  s.interpolate = interpolate;
  s.skip.resize(sched.steps() + 1);
  s.out.resize(sched.steps() + 1);
  const double s2 = prior_scale * prior_scale;
  for (std::size_t t = 0; t <= sched.steps(); ++t) {
    const double ab = sched.alpha_bar(t);
    const double a = std::sqrt(ab);
    const double sigma = std::sqrt(1.0 - ab);
    const double d = ab * s2 + (1.0 - ab);
    s.skip[t] = sigma / d;
    s.out[t] = -a * sigma / d;
  }
  return s;
}

std::pair<double, double> Denoiser::gains(std::size_t t) const {
  if (scaling_.empty()) {
    return {0.0, 1.0};
  }
  if (t >= scaling_.skip.size()) {
    throw OutOfRange("step " + std::to_string(t) + " beyond the output scaling table");
  }
  return {scaling_.skip[t], scaling_.out[t]};
}

void Denoiser::add_interpolation(const Eigen::VectorXd& x, const FrameMask& mask,
                                 Eigen::Ref<Eigen::VectorXd> h) const {
  if (!scaling_.interpolate || mask.length == 0) {
    return;
  }
  const auto stride = static_cast<Eigen::Index>(dims_.joints * 3);
  const auto start = static_cast<Eigen::Index>(mask.start);
  const auto len = static_cast<Eigen::Index>(mask.length);
  const auto frames = static_cast<Eigen::Index>(dims_.frames);
  const bool has_before = start > 0;
  const bool has_after = start + len < frames;
  if (!has_before && !has_after) {
    return;
  }
  const Eigen::VectorXd lo = x.segment((has_before ? start - 1 : start + len) * stride, stride);
  const Eigen::VectorXd hi = x.segment((has_after ? start + len : start - 1) * stride, stride);
  for (Eigen::Index i = 0; i < len; ++i) {
    const double w = static_cast<double>(i + 1) / static_cast<double>(len + 1);
    h.segment((start + i) * stride, stride) += (1.0 - w) * lo + w * hi;
  }
}

Denoiser Denoiser::initialize(DenoiserDims dims, std::mt19937_64& rng,
                              OutputScaling scaling) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dims.parameter_count()));
  const Layout l(dims);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto fill = [&](std::size_t offset, std::size_t count, double scale) {
    for (std::size_t i = 0; i < count; ++i) {
      p[static_cast<Eigen::Index>(offset + i)] = scale * normal(rng);
    }
  };
  const auto in = static_cast<double>(dims.input_size());
  const auto h = static_cast<double>(dims.hidden);
  fill(l.w1, dims.hidden * dims.input_size(), 1.0 / std::sqrt(in));
  fill(l.w2, dims.hidden * dims.hidden, 1.0 / std::sqrt(h));
  fill(l.w3, dims.sample_size() * dims.hidden, 0.1 / std::sqrt(h));
  fill(l.emb, dims.cond_dim * (dims.vocab_size + 1), 1.0);
  return Denoiser(dims, std::move(p), std::move(scaling));
}

std::size_t Denoiser::token_column(Condition c) const {
  if (!c) {
    return dims_.vocab_size;
  }
  if (*c >= dims_.vocab_size) {
    throw OutOfRange("condition token " + std::to_string(*c) + " outside vocabulary of " +
                     std::to_string(dims_.vocab_size));
  }
  return *c;
}

Eigen::MatrixXd Denoiser::assemble_inputs(std::span<const Eigen::VectorXd* const> x,
                                          std::span<const std::size_t> t,
                                          std::span<const Condition> c,
                                          std::span<const FrameMask* const> masks) const {
  const Layout l(dims_);
  const auto n = static_cast<Eigen::Index>(dims_.sample_size());
  const auto frames = static_cast<Eigen::Index>(dims_.frames);
  const auto tdim = static_cast<Eigen::Index>(dims_.time_dim);
  const auto cdim = static_cast<Eigen::Index>(dims_.cond_dim);
  const ConstMap emb(params_.data() + l.emb, cdim, static_cast<Eigen::Index>(dims_.vocab_size + 1));

  Eigen::MatrixXd in(static_cast<Eigen::Index>(dims_.input_size()),
                     static_cast<Eigen::Index>(x.size()));
  for (std::size_t b = 0; b < x.size(); ++b) {
    const auto col = static_cast<Eigen::Index>(b);
    if (x[b]->size() != n) {
      throw ShapeMismatch("denoiser input has " + std::to_string(x[b]->size()) +
                          " entries, expected " + std::to_string(n));
    }
    if (masks[b]->window_frames != dims_.frames) {
      throw ShapeMismatch("mask window does not match denoiser frames");
    }
    in.col(col).head(n) = *x[b];
    for (Eigen::Index f = 0; f < frames; ++f) {
      in(n + f, col) = masks[b]->masked(static_cast<std::size_t>(f)) ? 1.0 : 0.0;
    }
    in.col(col).segment(n + frames, tdim) = time_embedding(t[b], dims_.time_dim);
    in.col(col).segment(n + frames + tdim, cdim) =
        emb.col(static_cast<Eigen::Index>(token_column(c[b])));
  }
  return in;
}

Eigen::VectorXd Denoiser::predict(const Eigen::VectorXd& x_t, std::size_t t, Condition c,
                                  const FrameMask& mask) const {
  const Layout l(dims_);
  const auto in_size = static_cast<Eigen::Index>(dims_.input_size());
  const auto h = static_cast<Eigen::Index>(dims_.hidden);
  const auto out = static_cast<Eigen::Index>(dims_.sample_size());

  const Eigen::VectorXd* xs[] = {&x_t};
  const std::size_t ts[] = {t};
  const Condition cs[] = {c};
  const FrameMask* ms[] = {&mask};
  const Eigen::MatrixXd in = assemble_inputs(xs, ts, cs, ms);

  const ConstMap w1(params_.data() + l.w1, h, in_size);
  const ConstVecMap b1(params_.data() + l.b1, h);
  const ConstMap w2(params_.data() + l.w2, h, h);
  const ConstVecMap b2(params_.data() + l.b2, h);
  const ConstMap w3(params_.data() + l.w3, out, h);
  const ConstVecMap b3(params_.data() + l.b3, out);

  const Eigen::VectorXd z1 = w1 * in.col(0) + b1;
  const Eigen::VectorXd a1 = z1.cwiseProduct(sigmoid(z1));
  const Eigen::VectorXd z2 = w2 * a1 + b2;
  const Eigen::VectorXd a2 = z2.cwiseProduct(sigmoid(z2));
  const auto [skip, out_gain] = gains(t);
  Eigen::VectorXd h_out = w3 * a2 + b3;
  add_interpolation(x_t, mask, h_out);
  return out_gain * h_out + skip * x_t;
}

double Denoiser::masked_loss(std::span<const TrainingSample> batch,
                             Eigen::VectorXd* gradient) const {
  if (batch.empty()) {
    throw InvalidArgument("masked_loss needs a non-empty batch");
  }
  const Layout l(dims_);
  const auto in_size = static_cast<Eigen::Index>(dims_.input_size());
  const auto h = static_cast<Eigen::Index>(dims_.hidden);
  const auto out = static_cast<Eigen::Index>(dims_.sample_size());
  const auto stride = static_cast<Eigen::Index>(dims_.joints * 3);
  const auto bsz = static_cast<Eigen::Index>(batch.size());

  std::vector<const Eigen::VectorXd*> xs;
  std::vector<std::size_t> ts;
  std::vector<Condition> cs;
  std::vector<const FrameMask*> ms;
  for (const auto& s : batch) {
    if (s.noise.size() != out) {
      throw ShapeMismatch("target noise does not match denoiser output size");
    }
    if (s.mask.length == 0) {
      throw InvalidArgument("training sample has an empty mask");
    }
    xs.push_back(&s.noisy);
    ts.push_back(s.t);
    cs.push_back(s.condition);
    ms.push_back(&s.mask);
  }
  const Eigen::MatrixXd in = assemble_inputs(xs, ts, cs, ms);

  const ConstMap w1(params_.data() + l.w1, h, in_size);
  const ConstVecMap b1(params_.data() + l.b1, h);
  const ConstMap w2(params_.data() + l.w2, h, h);
  const ConstVecMap b2(params_.data() + l.b2, h);
  const ConstMap w3(params_.data() + l.w3, out, h);
  const ConstVecMap b3(params_.data() + l.b3, out);

  const Eigen::MatrixXd z1 = (w1 * in).colwise() + b1;
  const Eigen::MatrixXd s1 = sigmoid(z1);
  const Eigen::MatrixXd a1 = z1.cwiseProduct(s1);
  const Eigen::MatrixXd z2 = (w2 * a1).colwise() + b2;
  const Eigen::MatrixXd s2 = sigmoid(z2);
  const Eigen::MatrixXd a2 = z2.cwiseProduct(s2);
  Eigen::MatrixXd h_out = (w3 * a2).colwise() + b3;
  Eigen::VectorXd out_gain(bsz);
  Eigen::MatrixXd y(out, bsz);
  for (Eigen::Index b = 0; b < bsz; ++b) {
    const auto [skip, g] = gains(ts[static_cast<std::size_t>(b)]);
    out_gain[b] = g;
    add_interpolation(*xs[static_cast<std::size_t>(b)], *ms[static_cast<std::size_t>(b)],
                      h_out.col(b));
    y.col(b) = g * h_out.col(b) + skip * *xs[static_cast<std::size_t>(b)];
  }

  // d(loss)/d(network output) is non-zero only on masked rows.
  Eigen::MatrixXd dy = Eigen::MatrixXd::Zero(out, bsz);
  double loss = 0.0;
  for (Eigen::Index b = 0; b < bsz; ++b) {
    const FrameMask& m = batch[static_cast<std::size_t>(b)].mask;
    const Eigen::VectorXd& eps = batch[static_cast<std::size_t>(b)].noise;
    const auto begin = static_cast<Eigen::Index>(m.start) * stride;
    const auto count = static_cast<Eigen::Index>(m.length) * stride;
    const Eigen::VectorXd diff = y.col(b).segment(begin, count) - eps.segment(begin, count);
    const double inv_n = 1.0 / static_cast<double>(count);
    loss += diff.squaredNorm() * inv_n;
    dy.col(b).segment(begin, count) =
        (2.0 * inv_n * out_gain[b] / static_cast<double>(bsz)) * diff;
  }
  loss /= static_cast<double>(bsz);

  if (gradient == nullptr) {
    return loss;
  }
  gradient->setZero(params_.size());
  Map g_w3(gradient->data() + l.w3, out, h);
  VecMap g_b3(gradient->data() + l.b3, out);
  Map g_w2(gradient->data() + l.w2, h, h);
  VecMap g_b2(gradient->data() + l.b2, h);
  Map g_w1(gradient->data() + l.w1, h, in_size);
  VecMap g_b1(gradient->data() + l.b1, h);
  Map g_emb(gradient->data() + l.emb, static_cast<Eigen::Index>(dims_.cond_dim),
            static_cast<Eigen::Index>(dims_.vocab_size + 1));

  // silu'(z) = s(z) (1 + z (1 - s(z)))
  auto silu_grad = [](const Eigen::MatrixXd& z, const Eigen::MatrixXd& s) {
    return (s.array() * (1.0 + z.array() * (1.0 - s.array()))).matrix();
  };

  g_w3.noalias() = dy * a2.transpose();
  g_b3 = dy.rowwise().sum();
  const Eigen::MatrixXd dz2 = (w3.transpose() * dy).cwiseProduct(silu_grad(z2, s2));
  g_w2.noalias() = dz2 * a1.transpose();
  g_b2 = dz2.rowwise().sum();
  const Eigen::MatrixXd dz1 = (w2.transpose() * dz2).cwiseProduct(silu_grad(z1, s1));
  g_w1.noalias() = dz1 * in.transpose();
  g_b1 = dz1.rowwise().sum();

  const auto cdim = static_cast<Eigen::Index>(dims_.cond_dim);
  const Eigen::Index cond_row = in_size - cdim;
  const Eigen::MatrixXd d_cond = w1.middleCols(cond_row, cdim).transpose() * dz1;
  for (Eigen::Index b = 0; b < bsz; ++b) {
    const auto col =
        static_cast<Eigen::Index>(token_column(batch[static_cast<std::size_t>(b)].condition));
    g_emb.col(col) += d_cond.col(b);
  }
  return loss;
}

Eigen::VectorXd cfg_predict(const Denoiser& d, const Eigen::VectorXd& x_t, std::size_t t,
                            Condition c, double guidance_scale, const FrameMask& mask) {
  const Eigen::VectorXd uncond = d.predict(x_t, t, std::nullopt, mask);
  if (!c) {
    return uncond;
  }
  const Eigen::VectorXd cond = d.predict(x_t, t, c, mask);
  return (1.0 - guidance_scale) * uncond + guidance_scale * cond;
}

}  // namespace motionsplice::diffusion
