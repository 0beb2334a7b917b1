// Prints one PASS/FAIL line per acceptance criterion and exits non-zero if any
// criterion fails. Tolerances are fixed below.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.h"
#include "motionsplice/bezier.h"
#include "motionsplice/corpus_stats.h"
#include "motionsplice/diffusion/denoiser.h"
#include "motionsplice/diffusion/schedule.h"
#include "motionsplice/diffusion/stitcher.h"
#include "motionsplice/foot_refine.h"
#include "motionsplice/io/motion_file.h"
#include "motionsplice/io/trace_file.h"
#include "motionsplice/metrics.h"
#include "motionsplice/splice.h"
#include "motionsplice/synthetic.h"
#include "slide_suite.h"

namespace {

using namespace motionsplice;
using namespace motionsplice::diffusion;
namespace fs = std::filesystem;

// Criterion 1
constexpr std::size_t kCorpusClips = 200;
constexpr std::size_t kMinSequences = 20;
constexpr double kC0Factor = 1.5;
constexpr double kSpliceSeconds = 60.0;
// Criteria 2, 3
constexpr double kExactTol = 1e-12;
constexpr int kRandomPairs = 100;
// Criterion 4
constexpr int kDraws = 10000;
constexpr double kStdErrors = 3.0;
// Criterion 6
constexpr double kGradTol = 1e-4;
// Criterion 7
constexpr std::size_t kTrainWindows = 500;
constexpr std::size_t kWindowFrames = 50;
constexpr double kTrainMinutes = 30.0;
constexpr double kLossRatio = 0.5;
constexpr std::size_t kHeldOutPairs = 50;
constexpr double kWinShare = 0.9;
// Criterion 8
constexpr int kMetricInstances = 1000;
constexpr double kInvarianceTol = 1e-9;
// Criterion 9: dataset counts as published.
constexpr std::size_t kCorpusMotions = 35000;
constexpr double kCorpusHours = 330.16;
constexpr double kCorpusFps = 20.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int run_cli(const std::string& args, std::string* output = nullptr) {
  const std::string cmd = std::string(MOTIONSPLICE_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    return -1;
  }
  std::string out;
  char buf[4096];
  while (const std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) {
    out.append(buf, n);
  }
  const int status = pclose(pipe);
  if (output != nullptr) {
    *output = out;
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::current_path() / "acceptance_work" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Largest per-joint displacement between consecutive frames in [first, last).
double max_step(const MotionSequence& m, std::size_t first, std::size_t last) {
  double best = 0.0;
  for (std::size_t f = first; f < last; ++f) {
    for (std::size_t j = 0; j < m.joint_count(); ++j) {
      best = std::max(best, (m.position(f + 1, j) - m.position(f, j)).norm());
    }
  }
  return best;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

Outcome splice_pipeline() {
  const fs::path dir = scratch("splice");
  if (run_cli("gen-synthetic --seed 1 --count " + std::to_string(kCorpusClips) +
              " --min-frames 50 --max-frames 200 --out " + (dir / "clips").string()) != 0) {
    return {false, "gen-synthetic failed"};
  }
  const auto t0 = std::chrono::steady_clock::now();
  std::string log;
  if (run_cli("splice --seed 7 --in " + (dir / "clips").string() + " --out " +
                  (dir / "long").string(),
              &log) != 0) {
    return {false, "splice failed: " + log};
  }
  const double elapsed = seconds_since(t0);

  std::map<std::string, MotionSequence> clips;
  std::size_t sequences = 0;
  std::size_t length_bad = 0;
  std::size_t marker_bad = 0;
  std::size_t junctions = 0;
  std::size_t c0_bad = 0;
  double worst_ratio = 0.0;
  for (const auto& e : fs::directory_iterator(dir / "long")) {
    if (e.path().extension() != ".motion") {
      continue;
    }
    ++sequences;
    const auto file = io::read_motion_file(e.path());
    fs::path trace_path = e.path();
    trace_path.replace_extension(".trace.json");
    const auto trace = io::read_trace_file(trace_path);
    const std::size_t f = file.motion.frame_count();
    length_bad += (f < 600 || f > 935) ? 1 : 0;

    std::vector<std::size_t> prefix;
    std::vector<MotionSequence> sources;
    std::size_t sum = 0;
    for (const auto& name : trace.source_names) {
      auto it = clips.find(name);
      if (it == clips.end()) {
        it = clips.emplace(name, io::read_motion_file(dir / "clips" / (name + ".motion")).motion)
                 .first;
      }
      sources.push_back(it->second);
      sum += it->second.frame_count();
      prefix.push_back(sum);
    }
    marker_bad += (!file.script || file.script->markers() != prefix || sum != f) ? 1 : 0;

    const std::size_t w = trace.trace.window_frames;
    for (std::size_t k = 0; k < trace.trace.junction_frames.size(); ++k) {
      const std::size_t j = trace.trace.junction_frames[k];
      const double intra =
          std::max(max_step(sources[k], 0, sources[k].frame_count() - 1),
                   max_step(sources[k + 1], 0, sources[k + 1].frame_count() - 1));
      const double across = max_step(file.motion, j - 1, j + w);
      ++junctions;
      worst_ratio = std::max(worst_ratio, across / intra);
      c0_bad += across <= kC0Factor * intra ? 0 : 1;
    }
  }
  const bool pass = sequences >= kMinSequences && length_bad == 0 && marker_bad == 0 &&
                    c0_bad == 0 && elapsed < kSpliceSeconds;
  return {pass, std::to_string(sequences) + " sequences, " + std::to_string(length_bad) +
                    " outside [600,935], " + std::to_string(marker_bad) + " marker mismatches, " +
                    std::to_string(c0_bad) + "/" + std::to_string(junctions) +
                    " junctions over the C0 bound (worst ratio " + fmt(worst_ratio) +
                    "), splice " + fmt(elapsed) + " s"};
}

Outcome interpolation_exactness() {
  std::mt19937_64 rng(2);
  const auto sk = Skeleton::humanml3d();
  SpliceConfig cfg;
  double endpoint_err = 0.0;
  double interior_err = 0.0;
  for (int k = 0; k < kRandomPairs; ++k) {
    const auto prev = testing::random_motion(sk, 5 + static_cast<std::size_t>(k % 20), 3.0, rng);
    const auto next = testing::random_motion(sk, 5 + static_cast<std::size_t>(k % 13), 3.0, rng);
    const auto win = build_transition(prev, next, cfg);
    const std::size_t w = cfg.window_frames();
    const auto is = prev.frame(prev.frame_count() - cfg.tail_frames);
    const auto ie = next.frame(cfg.head_frames - 1);
    for (std::size_t c = 0; c < win.stride(); ++c) {
      endpoint_err = std::max(endpoint_err, std::abs(win.frame(0)[c] - is[c]));
      endpoint_err = std::max(endpoint_err, std::abs(win.frame(w - 1)[c] - ie[c]));
    }
    for (std::size_t i = 1; i + 1 < w; ++i) {
      const long double a = static_cast<long double>(i) / static_cast<long double>(w - 1);
      for (std::size_t c = 0; c < win.stride(); ++c) {
        const long double want = (1.0L - a) * is[c] + a * ie[c];
        const long double got = win.frame(i)[c];
        interior_err = std::max(interior_err, static_cast<double>(std::abs(got - want)));
      }
    }
  }
  return {endpoint_err <= kExactTol && interior_err <= kExactTol,
          "endpoint error " + fmt(endpoint_err) + ", interior error " + fmt(interior_err) +
              " over " + std::to_string(kRandomPairs) + " pairs"};
}

Outcome bezier_identities() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double err = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Vec3 p0(u(rng), u(rng), u(rng));
    const Vec3 p1(u(rng), u(rng), u(rng));
    const Vec3 p2(u(rng), u(rng), u(rng));
    const BezierArc arc{p0, p1, p2};
    err = std::max(err, (bezier_eval(arc, 0.0) - arc.p0).norm());
    err = std::max(err, (bezier_eval(arc, 1.0) - arc.p2).norm());
    err = std::max(err,
                   (bezier_eval(arc, 0.5) - (0.25 * arc.p0 + 0.5 * arc.p1 + 0.25 * arc.p2)).norm());
  }

  FootRefineConfig cfg;
  std::size_t sample_mismatch = 0;
  std::size_t decreased = 0;
  const auto suite = testing::slide_suite(4);
  for (const auto& c : suite) {
    const auto out = refine_transition_feet(c.motion, c.junction, c.window, cfg);
    const std::size_t first = c.junction;
    const std::size_t last = c.junction + c.window - 1;
    const auto& sj = c.motion.skeleton().special();
    const double lt =
        (c.motion.position(last, sj.left_foot) - c.motion.position(first, sj.left_foot)).norm();
    const double rt =
        (c.motion.position(last, sj.right_foot) - c.motion.position(first, sj.right_foot)).norm();
    const std::size_t lead = rt > lt ? sj.right_foot : sj.left_foot;
    const std::size_t trail = lead == sj.left_foot ? sj.right_foot : sj.left_foot;
    const std::size_t phase_a = (c.window + 1) / 2;
    const std::size_t phase_b = c.window - phase_a;
    const auto arc_a =
        step_arc(c.motion.position(first, lead), c.motion.position(last, lead), cfg.clearance);
    const auto arc_b =
        step_arc(c.motion.position(first, trail), c.motion.position(last, trail), cfg.clearance);
    for (std::size_t i = 0; i < phase_a; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(phase_a - 1);
      sample_mismatch += out.position(first + i, lead) == bezier_eval(arc_a, t) ? 0 : 1;
    }
    for (std::size_t i = 0; i < phase_b; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(phase_b - 1);
      sample_mismatch += out.position(first + phase_a + i, trail) == bezier_eval(arc_b, t) ? 0 : 1;
    }
    const FrameWindow w{c.junction, c.window};
    decreased += foot_slide_score(out, w) < foot_slide_score(c.motion, w) ? 1 : 0;
  }
  return {err <= kExactTol && sample_mismatch == 0 && decreased == suite.size(),
          "identity error " + fmt(err) + ", " + std::to_string(sample_mismatch) +
              " refined frames off the arc, slide decreased in " + std::to_string(decreased) +
              "/" + std::to_string(suite.size())};
}

Outcome diffusion_schedule() {
  const auto sched = make_schedule();
  std::mt19937_64 rng(5);
  const double x0 = 0.6;
  std::string detail = "alpha_bar(T) " + fmt(sched.alpha_bar(sched.steps()));
  bool pass = sched.steps() == 1000 && sched.alpha_bar(sched.steps()) < 1e-4;
  for (const std::size_t t : {1u, 500u, 1000u}) {
    double sum = 0.0;
    double sum2 = 0.0;
    for (int k = 0; k < kDraws; ++k) {
      const double v =
          forward_sample(Eigen::VectorXd::Constant(1, x0), t, standard_normal(1, rng), sched)[0];
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / kDraws;
    const double var = (sum2 - kDraws * mean * mean) / (kDraws - 1);
    const double want_mean = std::sqrt(sched.alpha_bar(t)) * x0;
    const double want_var = 1.0 - sched.alpha_bar(t);
    const double z_mean = std::abs(mean - want_mean) / std::sqrt(want_var / kDraws);
    const double z_var = std::abs(var - want_var) / (want_var * std::sqrt(2.0 / (kDraws - 1)));
    pass = pass && z_mean <= kStdErrors && z_var <= kStdErrors;
    detail += "; t=" + std::to_string(t) + " mean " + fmt(z_mean) + " SE, var " + fmt(z_var) +
              " SE";
  }
  return {pass, detail};
}

DenoiserDims small_dims() {
  DenoiserDims d;
  d.frames = 8;
  d.joints = 3;
  d.time_dim = 6;
  d.cond_dim = 4;
  d.hidden = 10;
  d.vocab_size = 3;
  return d;
}

Outcome cfg_identities() {
  std::mt19937_64 rng(6);
  const auto sched = make_schedule();
  int checked = 0;
  int failed = 0;
  for (int k = 0; k < 100; ++k) {
    const auto d = Denoiser::initialize(small_dims(), rng, OutputScaling::gaussian(sched, 0.05));
    const Eigen::VectorXd x = standard_normal(72, rng);
    const std::size_t t = 1 + static_cast<std::size_t>(rng() % 1000);
    const FrameMask m = mask_middle(8, 0.25, rng);
    const Condition c = static_cast<std::size_t>(rng() % 3);
    const Eigen::VectorXd cond = d.predict(x, t, c, m);
    const Eigen::VectorXd uncond = d.predict(x, t, std::nullopt, m);
    failed += cfg_predict(d, x, t, c, 1.0, m) == cond ? 0 : 1;
    failed += cfg_predict(d, x, t, c, 0.0, m) == uncond ? 0 : 1;
    failed += cfg_predict(d, x, t, std::nullopt, 3.0, m) == uncond ? 0 : 1;
    checked += 3;
  }
  return {failed == 0, std::to_string(checked - failed) + "/" + std::to_string(checked) +
                           " identities exact"};
}

Outcome gradient_check() {
  std::mt19937_64 rng(7);
  const auto sched = make_schedule();
  auto d = Denoiser::initialize(small_dims(), rng, OutputScaling::gaussian(sched, 0.05));
  d.parameters() = standard_normal(d.parameters().size(), rng) * 0.5;
  std::vector<TrainingSample> batch;
  for (int k = 0; k < 4; ++k) {
    TrainingSample s;
    s.noisy = standard_normal(72, rng);
    s.noise = standard_normal(72, rng);
    s.t = 1 + static_cast<std::size_t>(rng() % 1000);
    s.condition = k == 3 ? Condition{} : Condition{static_cast<std::size_t>(k)};
    s.mask = mask_middle(8, 0.25, rng);
    batch.push_back(s);
  }
  Eigen::VectorXd grad;
  d.masked_loss(batch, &grad);
  const double h = 1e-5;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < d.parameters().size(); ++i) {
    const double v = d.parameters()[i];
    d.parameters()[i] = v + h;
    const double up = d.masked_loss(batch, nullptr);
    d.parameters()[i] = v - h;
    const double down = d.masked_loss(batch, nullptr);
    d.parameters()[i] = v;
    const double numeric = (up - down) / (2.0 * h);
    // Relative error with a floor for parameters whose gradient is ~0.
    worst = std::max(worst, std::abs(grad[i] - numeric) /
                                std::max(std::abs(grad[i]) + std::abs(numeric), 1e-6));
  }
  return {worst <= kGradTol, "max relative error " + fmt(worst) + " over " +
                                 std::to_string(d.parameters().size()) + " parameters"};
}

Outcome toy_training() {
  const std::vector<Style> styles(std::begin(kAllStyles), std::end(kAllStyles));
  std::vector<AnnotatedMotion> clips;
  for (const auto& r : make_recipes(kCorpusClips, 50, 200, styles, 1)) {
    clips.push_back(generate_clip(r));
  }
  const auto vocab = style_vocabulary();
  std::mt19937_64 rng(2);
  const std::span<const AnnotatedMotion> train(clips.data(), 150);
  const auto windows = sample_windows(train, kWindowFrames, kTrainWindows, vocab, rng);

  TrainConfig cfg;
  cfg.seed = 3;
  const auto t0 = std::chrono::steady_clock::now();
  const FitResult fit = fit_stitcher(windows, vocab, make_schedule(), cfg);
  const double minutes = seconds_since(t0) / 60.0;
  const std::vector<double> first(fit.epoch_loss.begin(), fit.epoch_loss.begin() + 10);
  const std::vector<double> last(fit.epoch_loss.end() - 10, fit.epoch_loss.end());
  const double ratio = median(last) / median(first);

  std::size_t wins = 0;
  std::size_t identical = 0;
  for (std::size_t k = 0; k < kHeldOutPairs; ++k) {
    const auto& prev = clips[150 + k % 50];
    const auto& next = clips[150 + (k * 7 + 3) % 50];
    StitchJob job{prev.motion(), next.motion(), condition_for(next.script(), vocab), 5, 2.5};
    const auto r = stitch(job, fit.model, rng);
    const std::size_t f = prev.frame_count();
    const double stitched = max_transition_distance(r.assembled, f - 1, f + job.transition_len);
    const double naive = transition_distance(concatenate(prev.motion(), next.motion()), f - 1);
    wins += stitched < naive ? 1 : 0;

    const auto aligned = root_align(prev.motion(), next.motion());
    const std::size_t a = r.context_before;
    const std::size_t b = r.window.frame_count() - r.context_after;
    const bool same =
        r.window.slice(0, a) == prev.motion().slice(f - a, f) &&
        r.window.slice(b, r.window.frame_count()) == aligned.slice(0, r.context_after) &&
        r.assembled.slice(0, f) == prev.motion() &&
        r.assembled.slice(f + job.transition_len, r.assembled.frame_count()) == aligned;
    identical += same ? 1 : 0;
  }
  const bool pass = minutes <= kTrainMinutes && ratio < kLossRatio &&
                    static_cast<double>(wins) >= kWinShare * kHeldOutPairs &&
                    identical == kHeldOutPairs;
  return {pass, "train " + fmt(minutes) + " min, loss median last/first " + fmt(ratio) +
                    ", stitched beats naive " + std::to_string(wins) + "/" +
                    std::to_string(kHeldOutPairs) + ", unmasked identical " +
                    std::to_string(identical) + "/" + std::to_string(kHeldOutPairs)};
}

Outcome metric_suite() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> off(-50.0, 50.0);
  std::uniform_int_distribution<std::size_t> frames(2, 15);
  std::size_t failed = 0;
  auto close = [](double a, double b) { return std::abs(a - b) <= kInvarianceTol; };
  auto zero = [](const ApeAveReport& r) {
    return r.root_joint == 0.0 && r.global_traj == 0.0 && r.mean_local == 0.0 &&
           r.mean_global == 0.0;
  };
  for (int k = 0; k < kMetricInstances; ++k) {
    const auto sk = testing::tiny_skeleton();
    const auto gt = testing::random_motion(sk, frames(rng), 2.0, rng);
    const auto gen = testing::random_motion(sk, gt.frame_count(), 2.0, rng);
    const Vec3 d(off(rng), off(rng), off(rng));
    const std::size_t j = rng() % (gt.frame_count() - 1);

    const auto still = concatenate(gt.slice(j, j + 1), gt.slice(j, j + 1));
    bool ok = transition_distance(still, 0) == 0.0;
    ok = ok && close(transition_distance(gt.translated(d), j), transition_distance(gt, j));
    ok = ok && zero(ape(gt, gt)) && zero(ave(gt, gt));
    const auto a0 = ape(gt, gen);
    const auto a1 = ape(gt.translated(d), gen.translated(d));
    ok = ok && close(a0.root_joint, a1.root_joint) && close(a0.global_traj, a1.global_traj) &&
         close(a0.mean_local, a1.mean_local) && close(a0.mean_global, a1.mean_global);
    const auto shifted = ape(gt, gt.translated(d));
    ok = ok && close(shifted.mean_local, 0.0) && close(shifted.mean_global, d.norm());
    const auto v0 = ave(gt, gen);
    const auto v1 = ave(gt.translated(d), gen);
    // Variances of coordinates up to ~50 carry cancellation error, hence 1e-6.
    ok = ok && std::abs(v0.mean_global - v1.mean_global) <= 1e-6 &&
         std::abs(v0.mean_local - v1.mean_local) <= 1e-6 &&
         std::abs(v0.root_joint - v1.root_joint) <= 1e-6;
    failed += ok ? 0 : 1;
  }
  return {failed == 0, std::to_string(kMetricInstances - failed) + "/" +
                           std::to_string(kMetricInstances) + " instances pass"};
}

Outcome table_arithmetic() {
  const double mean = implied_mean_frames(kCorpusMotions, kCorpusHours, kCorpusFps);
  return {mean >= 600.0 && mean <= 935.0, "implied mean clip length " + fmt(mean) + " frames"};
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      files[fs::relative(e.path(), root).string()] = io::read_text(e.path());
    }
  }
  return files;
}

Outcome determinism() {
  std::vector<std::map<std::string, std::string>> runs;
  for (const char* name : {"run_a", "run_b"}) {
    const fs::path d = scratch(std::string("determinism/") + name);
    const std::string p = d.string();
    const std::vector<std::string> steps = {
        "gen-synthetic --seed 11 --count 60 --out " + p + "/clips",
        "splice --seed 11 --attempts 10 --in " + p + "/clips --out " + p + "/long",
        "refine-feet --seed 11 --in " + p + "/long --out " + p + "/refined",
        "train-stitcher --seed 11 --in " + p + "/clips --out " + p +
            "/model.ckpt --windows 64 --window 20 --epochs 3 --hidden 16 --steps 50 --loss-csv " +
            p + "/loss.csv",
        "stitch --seed 11 --model " + p + "/model.ckpt --prev " + p + "/clips/clip_0000.motion" +
            " --next " + p + "/clips/clip_0001.motion --condition walk --out " + p +
            "/stitched.motion",
        "eval --seed 11 --json --in " + p + "/refined",
    };
    std::string eval_out;
    for (const auto& s : steps) {
      std::string out;
      if (run_cli(s, &out) != 0) {
        return {false, "step failed: " + s + "\n" + out};
      }
      eval_out = out;
    }
    io::write_text(d / "eval.json", eval_out);
    runs.push_back(snapshot(d));
  }
  std::size_t differing = 0;
  for (const auto& [name, bytes] : runs[0]) {
    const auto it = runs[1].find(name);
    differing += (it == runs[1].end() || it->second != bytes) ? 1 : 0;
  }
  differing += runs[0].size() == runs[1].size() ? 0 : 1;
  return {differing == 0 && runs[0].size() > 10,
          std::to_string(runs[0].size()) + " artifacts, " + std::to_string(differing) +
              " differ"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"splice pipeline", splice_pipeline},
      {"interpolation exactness", interpolation_exactness},
      {"bezier identities and foot slide", bezier_identities},
      {"diffusion schedule", diffusion_schedule},
      {"guidance identities", cfg_identities},
      {"denoiser gradient check", gradient_check},
      {"toy training and stitching", toy_training},
      {"metric zero and invariance suite", metric_suite},
      {"dataset table arithmetic", table_arithmetic},
      {"pipeline determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].first
              << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
