#include <algorithm>
#include <charconv>
#include <iostream>
#include <memory>
#include <random>

#include "commands.h"
#include "corpus_dir.h"
#include "motionsplice/diffusion/checkpoint.h"
#include "motionsplice/diffusion/stitcher.h"
#include "motionsplice/error.h"
#include "motionsplice/metrics.h"
#include "motionsplice/synthetic.h"
#include "table.h"

namespace motionsplice::cli {

namespace fs = std::filesystem;
using namespace motionsplice::diffusion;

namespace {

// Stream for the training loop, independent of the window-sampling stream.
std::uint64_t training_seed(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(seed),
                    0x7472u};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Command add_train_stitcher(CLI::App& root) {
  struct Opts {
    std::uint64_t seed = 0;
    std::string in;
    std::string out;
    std::string loss_csv;
    std::size_t window = 50;
    std::size_t windows = 500;
    std::size_t steps = kDefaultSteps;
    double beta_start = kDefaultBetaStart;
    double beta_end = kDefaultBetaEnd;
    TrainConfig cfg;
    bool no_interpolate = false;
    std::vector<std::string> vocabulary = style_vocabulary();
  };
  auto o = std::make_shared<Opts>();
  CLI::App* app = root.add_subcommand(
      "train-stitcher", "Train the diffusion stitcher on windows cut from a corpus");
  add_common_options(app, o->seed);
  app->add_option("--in", o->in, "Corpus directory")->required();
  app->add_option("--out", o->out, "Checkpoint path")->required();
  app->add_option("--loss-csv", o->loss_csv, "Per-epoch loss CSV (epoch,mean_loss)");
  app->add_option("--window", o->window, "Model window in frames")->capture_default_str();
  app->add_option("--windows", o->windows, "Training windows to sample")->capture_default_str();
  app->add_option("--epochs", o->cfg.epochs, "Epochs")->capture_default_str();
  app->add_option("--batch-size", o->cfg.batch_size, "Minibatch size")->capture_default_str();
  app->add_option("--lr", o->cfg.learning_rate, "Adam learning rate")->capture_default_str();
  app->add_option("--final-lr-fraction", o->cfg.final_lr_fraction,
                  "Learning rate at the end of the cosine decay, relative to --lr")
      ->capture_default_str();
  app->add_option("--hidden", o->cfg.hidden, "Hidden layer width")->capture_default_str();
  app->add_option("--time-dim", o->cfg.time_dim, "Time embedding size")->capture_default_str();
  app->add_option("--cond-dim", o->cfg.cond_dim, "Condition embedding size")
      ->capture_default_str();
  app->add_option("--cond-dropout", o->cfg.cond_dropout, "Null-condition probability")
      ->capture_default_str();
  app->add_option("--mask-fraction", o->cfg.mask_fraction, "Masked share of each window")
      ->capture_default_str();
  app->add_option("--prior-scale", o->cfg.prior_scale,
                  "Spread of clean frames around the predicted mean (0: raw output)")
      ->capture_default_str();
  app->add_flag("--no-interpolate", o->no_interpolate,
                "Predict masked frames without the in-between base");
  app->add_option("--steps", o->steps, "Diffusion steps T")->capture_default_str();
  app->add_option("--beta-start", o->beta_start, "beta_1")->capture_default_str();
  app->add_option("--beta-end", o->beta_end, "beta_T")->capture_default_str();
  app->add_option("--vocabulary", o->vocabulary, "Condition labels")
      ->delimiter(',')
      ->capture_default_str();

  return {app, [o] {
            TrainConfig cfg = o->cfg;
            cfg.seed = training_seed(o->seed);
            cfg.interpolate = !o->no_interpolate && cfg.prior_scale > 0.0;
            const DiffusionSchedule sched(o->steps, o->beta_start, o->beta_end);
            const auto clips = annotated(read_motion_dir(o->in));
            std::mt19937_64 rng(o->seed);
            const auto windows = sample_windows(clips, o->window, o->windows, o->vocabulary, rng);
            const FitResult fit = fit_stitcher(windows, o->vocabulary, sched, cfg);
            save_checkpoint(o->out, fit.model);
            if (!o->loss_csv.empty()) {
              std::string csv = "epoch,mean_loss\n";
              for (std::size_t e = 0; e < fit.epoch_loss.size(); ++e) {
                csv += std::to_string(e + 1) + "," + shortest(fit.epoch_loss[e]) + "\n";
              }
              io::write_text(o->loss_csv, csv);
            }
            const std::size_t k = std::min<std::size_t>(10, fit.epoch_loss.size());
            const std::vector<double> first(fit.epoch_loss.begin(),
                                            fit.epoch_loss.begin() + static_cast<long>(k));
            const std::vector<double> last(fit.epoch_loss.end() - static_cast<long>(k),
                                           fit.epoch_loss.end());
            Table t({"quantity", "value"});
            t.add_row({"windows", std::to_string(windows.size())});
            t.add_row({"window_frames", std::to_string(o->window)});
            t.add_row({"parameters", std::to_string(fit.model.denoiser.parameters().size())});
            t.add_row({"epochs", std::to_string(fit.epoch_loss.size())});
            t.add_row({"median_loss_first_" + std::to_string(k), fixed(median_of(first), 6)});
            t.add_row({"median_loss_last_" + std::to_string(k), fixed(median_of(last), 6)});
            t.print(std::cout);
            std::cout << "wrote checkpoint " << o->out << '\n';
          }};
}

Command add_stitch(CLI::App& root) {
  struct Opts {
    std::uint64_t seed = 0;
    std::string model;
    std::string prev;
    std::string next;
    std::string out;
    std::size_t frames = 5;
    std::string condition;
    double guidance = 2.5;
    std::string clamp = "renoise";
    bool no_align = false;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* app =
      root.add_subcommand("stitch", "Generate a transition between two clips with the stitcher");
  add_common_options(app, o->seed);
  app->add_option("--model", o->model, "Checkpoint")->required();
  app->add_option("--prev", o->prev, "Clip before the transition")->required();
  app->add_option("--next", o->next, "Clip after the transition")->required();
  app->add_option("--out", o->out, "Output motion file")->required();
  app->add_option("--frames", o->frames, "Transition length")->capture_default_str();
  app->add_option("--condition", o->condition, "Condition label (default: unconditional)");
  app->add_option("--guidance", o->guidance, "Guidance scale s")->capture_default_str();
  app->add_option("--clamp", o->clamp, "Known-frame clamp")
      ->check(CLI::IsMember({"renoise", "clean"}))
      ->capture_default_str();
  app->add_flag("--no-align", o->no_align, "Do not root-align the next clip");

  return {app, [o] {
            const StitcherModel model = load_checkpoint(o->model);
            const io::MotionFile prev = io::read_motion_file(o->prev);
            const io::MotionFile next = io::read_motion_file(o->next);
            StitchJob job{prev.motion, next.motion, std::nullopt, o->frames, o->guidance};
            if (!o->condition.empty()) {
              job.condition = model.token(o->condition);
            }
            StitchOptions options;
            options.clamp = o->clamp == "clean" ? ClampMode::kClean : ClampMode::kRenoise;
            options.align_next = !o->no_align;
            std::mt19937_64 rng(o->seed);
            const StitchResult r = stitch(job, model, rng, options);

            const std::size_t junction = prev.motion.frame_count();
            io::MotionFile out{r.assembled, std::nullopt};
            if (prev.script && next.script) {
              const std::string label = o->condition.empty() ? "transition" : o->condition;
              TimedScript mid = insert_timestamps(
                  *prev.script, TimedScript::single(label, o->frames), junction);
              out.script = insert_timestamps(mid, *next.script, junction + o->frames);
            }
            io::write_motion_file(o->out, out);
            io::TraceFile trace{
                {{0, 1}, {junction}, o->frames},
                {fs::path(o->prev).stem().string(), fs::path(o->next).stem().string()}};
            io::write_trace_file(trace_path(o->out), trace);

            const MotionSequence naive = concatenate(prev.motion, next.motion);
            Table t({"quantity", "value"});
            t.add_row({"transition_frames", std::to_string(r.transition.frame_count())});
            t.add_row({"context_before", std::to_string(r.context_before)});
            t.add_row({"context_after", std::to_string(r.context_after)});
            t.add_row({"output_frames", std::to_string(r.assembled.frame_count())});
            t.add_row({"junction_distance",
                       fixed(max_transition_distance(r.assembled, junction - 1,
                                                     junction + o->frames))});
            t.add_row({"naive_distance", fixed(transition_distance(naive, junction - 1))});
            t.print(std::cout);
          }};
}

}  // namespace motionsplice::cli
