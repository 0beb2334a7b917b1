#include <algorithm>
#include <iostream>
#include <map>
#include <memory>

#include <json.hpp>

#include "commands.h"
#include "corpus_dir.h"
#include "motionsplice/corpus_stats.h"
#include "motionsplice/error.h"
#include "motionsplice/foot_refine.h"
#include "motionsplice/splice.h"
#include "motionsplice/synthetic.h"
#include "table.h"

namespace motionsplice::cli {

namespace fs = std::filesystem;

void add_common_options(CLI::App* app, std::uint64_t& seed) {
  app->add_option("--seed", seed, "Random seed")->capture_default_str();
  app->set_config("--config", "", "Read option values from a TOML/INI file");
}

Command add_gen_synthetic(CLI::App& root) {
  struct Opts {
    std::uint64_t seed = 0;
    std::string out;
    std::size_t count = 200;
    std::size_t min_frames = 50;
    std::size_t max_frames = 200;
    std::vector<std::string> styles = style_vocabulary();
    double fps = 20.0;
    double ground_y = 0.0;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* app = root.add_subcommand("gen-synthetic", "Write a corpus of synthetic clips");
  add_common_options(app, o->seed);
  app->add_option("--out", o->out, "Output directory")->required();
  app->add_option("--count", o->count, "Number of clips")->capture_default_str();
  app->add_option("--min-frames", o->min_frames, "Shortest clip")->capture_default_str();
  app->add_option("--max-frames", o->max_frames, "Longest clip")->capture_default_str();
  app->add_option("--styles", o->styles, "Styles to draw from (walk, run, wave, idle)")
      ->delimiter(',')
      ->capture_default_str();
  app->add_option("--fps", o->fps, "Frame rate")->capture_default_str();
  app->add_option("--ground-y", o->ground_y, "Ground height")->capture_default_str();

  return {app, [o] {
            std::vector<Style> styles;
            for (const auto& name : o->styles) {
              const auto s = parse_style(name);
              if (!s) {
                throw InvalidArgument("unknown style '" + name + "'");
              }
              styles.push_back(*s);
            }
            auto recipes = make_recipes(o->count, o->min_frames, o->max_frames, styles, o->seed);
            ensure_dir(o->out);
            std::map<std::string, std::size_t> per_style;
            std::size_t frames = 0;
            for (std::size_t i = 0; i < recipes.size(); ++i) {
              recipes[i].fps = o->fps;
              recipes[i].ground_y = o->ground_y;
              const AnnotatedMotion clip = generate_clip(recipes[i]);
              io::write_motion_file(fs::path(o->out) / (numbered_name("clip", i, recipes.size()) +
                                                        kMotionExtension),
                                    io::MotionFile::from(clip));
              ++per_style[std::string(style_name(recipes[i].style))];
              frames += clip.frame_count();
            }
            Table t({"style", "clips"});
            for (const auto& [name, n] : per_style) {
              t.add_row({name, std::to_string(n)});
            }
            t.print(std::cout);
            std::cout << "wrote " << recipes.size() << " clips (" << frames << " frames) to "
                      << o->out << '\n';
          }};
}

Command add_filter(CLI::App& root) {
  struct Opts {
    std::uint64_t seed = 0;
    std::string in;
    std::string out;
    std::size_t min_frames = SpliceConfig{}.min_clip_frames;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* app = root.add_subcommand("filter", "Drop clips shorter than --min-frames");
  add_common_options(app, o->seed);
  app->add_option("--in", o->in, "Input directory")->required();
  app->add_option("--out", o->out, "Output directory")->required();
  app->add_option("--min-frames", o->min_frames, "Minimum clip length kept")
      ->capture_default_str();

  return {app, [o] {
            SpliceConfig cfg;
            cfg.min_clip_frames = o->min_frames;
            const auto motions = read_motion_dir(o->in);
            ensure_dir(o->out);
            std::size_t kept = 0;
            for (const auto& m : motions) {
              if (m.file.motion.frame_count() < cfg.min_clip_frames) {
                continue;
              }
              io::write_motion_file(fs::path(o->out) / (m.name + kMotionExtension), m.file);
              ++kept;
            }
            std::cout << "kept " << kept << " of " << motions.size() << " clips; removed "
                      << motions.size() - kept << " shorter than " << cfg.min_clip_frames
                      << " frames\n";
          }};
}

Command add_splice(CLI::App& root) {
  struct Opts {
    std::uint64_t seed = 0;
    std::string in;
    std::string out;
    SpliceConfig cfg;
    std::size_t max_output = 935;
    std::string facing = "head-neck";
  };
  auto o = std::make_shared<Opts>();
  CLI::App* app =
      root.add_subcommand("splice", "Chain compatible clips into long sequences with traces");
  add_common_options(app, o->seed);
  app->add_option("--in", o->in, "Corpus directory")->required();
  app->add_option("--out", o->out, "Output directory")->required();
  app->add_option("--min-clip-frames", o->cfg.min_clip_frames, "Filter threshold")
      ->capture_default_str();
  app->add_option("--min-output", o->cfg.min_output_frames, "Shortest emitted sequence")
      ->capture_default_str();
  app->add_option("--max-output", o->max_output, "Longest emitted sequence (0: unbounded)")
      ->capture_default_str();
  app->add_option("--cos-threshold", o->cfg.facing_cos_threshold,
                  "Facing cosine needed to chain two clips")
      ->capture_default_str();
  app->add_option("--facing", o->facing, "Facing vector")
      ->check(CLI::IsMember({"head-neck", "horizontal"}))
      ->capture_default_str();
  app->add_option("--tail-frames", o->cfg.tail_frames, "Frames taken from the previous clip")
      ->capture_default_str();
  app->add_option("--head-frames", o->cfg.head_frames, "Frames taken from the next clip")
      ->capture_default_str();
  app->add_option("--attempts", o->cfg.chain_attempts, "Chains to grow")->capture_default_str();
  app->add_option("--threads", o->cfg.threads, "Worker threads")->capture_default_str();

  return {app, [o] {
            SpliceConfig cfg = o->cfg;
            cfg.rng_seed = o->seed;
            cfg.max_output_frames =
                o->max_output == 0 ? std::nullopt : std::optional<std::size_t>(o->max_output);
            cfg.facing_mode =
                o->facing == "horizontal" ? FacingMode::kHorizontal : FacingMode::kHeadNeck;
            cfg.validate();

            const auto motions = read_motion_dir(o->in);
            std::vector<std::string> names;
            std::vector<AnnotatedMotion> clips;
            for (const auto& m : motions) {
              if (m.file.motion.frame_count() >= cfg.min_clip_frames) {
                names.push_back(m.name);
                clips.push_back(m.file.annotated());
              }
            }
            const AssembleResult result = assemble_long(clips, cfg);
            ensure_dir(o->out);

            Table t({"sequence", "frames", "clips", "seconds"});
            std::size_t min_frames = 0;
            std::size_t max_frames = 0;
            for (std::size_t i = 0; i < result.sequences.size(); ++i) {
              const LongSequence& s = result.sequences[i];
              const std::string name = numbered_name("long", i, result.sequences.size());
              const fs::path path = fs::path(o->out) / (name + kMotionExtension);
              io::write_motion_file(path, io::MotionFile::from(s.motion));
              io::TraceFile trace{s.trace, {}};
              for (const std::size_t idx : s.trace.source_clips) {
                trace.source_names.push_back(names[idx]);
              }
              io::write_trace_file(trace_path(path), trace);
              io::write_text(fs::path(o->out) / (name + ".txt"),
                             s.motion.script().timestamped_text() + '\n');
              const std::size_t f = s.motion.frame_count();
              min_frames = i == 0 ? f : std::min(min_frames, f);
              max_frames = std::max(max_frames, f);
              t.add_row({name, std::to_string(f), std::to_string(s.trace.source_clips.size()),
                         fixed(duration_seconds(s.motion.motion()), 2)});
            }
            t.print(std::cout);
            std::cout << "corpus " << motions.size() << " clips, " << clips.size()
                      << " after filtering\n"
                      << "emitted " << result.sequences.size() << " of " << result.attempts
                      << " chains (" << result.exhausted << " exhausted)";
            if (!result.sequences.empty()) {
              std::cout << ", frames " << min_frames << ".." << max_frames;
            }
            std::cout << '\n';
          }};
}

Command add_refine_feet(CLI::App& root) {
  struct Opts {
    std::uint64_t seed = 0;
    std::string in;
    std::string out;
    FootRefineConfig cfg;
    bool no_ankles = false;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* app = root.add_subcommand(
      "refine-feet", "Replace foot paths in every traced transition window with Bezier steps");
  add_common_options(app, o->seed);
  app->add_option("--in", o->in, "Directory of spliced sequences with trace sidecars")
      ->required();
  app->add_option("--out", o->out, "Output directory")->required();
  app->add_option("--clearance", o->cfg.clearance, "Step height above the chord (m)")
      ->capture_default_str();
  app->add_option("--split", o->cfg.split_ratio, "Window fraction for the first foot")
      ->capture_default_str();
  app->add_flag("--no-ankles", o->no_ankles, "Leave ankle joints untouched");

  return {app, [o] {
            FootRefineConfig cfg = o->cfg;
            cfg.carry_ankles = !o->no_ankles;
            cfg.validate();
            ensure_dir(o->out);
            Table t({"sequence", "junctions", "slide_before", "slide_after"});
            std::size_t refined = 0;
            for (const auto& path : list_motion_files(o->in)) {
              const auto trace = read_trace_if_present(path);
              if (!trace) {
                continue;
              }
              io::MotionFile file = io::read_motion_file(path);
              const std::size_t w = trace->trace.window_frames;
              double before = 0.0;
              double after = 0.0;
              for (const std::size_t j : trace->trace.junction_frames) {
                before += foot_slide_score(file.motion, {j, w});
                file.motion = refine_transition_feet(file.motion, j, w, cfg);
                after += foot_slide_score(file.motion, {j, w});
              }
              const std::size_t n = trace->trace.junction_frames.size();
              const double scale = n == 0 ? 0.0 : 1.0 / static_cast<double>(n);
              const fs::path dst = fs::path(o->out) / path.filename();
              io::write_motion_file(dst, file);
              io::write_trace_file(trace_path(dst), *trace);
              t.add_row({path.stem().string(), std::to_string(n), fixed(before * scale),
                         fixed(after * scale)});
              ++refined;
            }
            t.print(std::cout);
            std::cout << "refined " << refined << " sequences\n";
          }};
}

Command add_stats(CLI::App& root) {
  struct Opts {
    std::uint64_t seed = 0;
    std::string in;
    std::size_t bin = 50;
    bool json = false;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* app = root.add_subcommand("stats", "Corpus statistics");
  add_common_options(app, o->seed);
  app->add_option("--in", o->in, "Corpus directory")->required();
  app->add_option("--bin", o->bin, "Histogram bin width in frames")->capture_default_str();
  app->add_flag("--json", o->json, "Emit JSON instead of tables");

  return {app, [o] {
            const auto motions = read_motion_dir(o->in);
            const CorpusStats s = corpus_stats(annotated(motions), o->bin);
            if (o->json) {
              nlohmann::json doc;
              doc["n_motions"] = s.n_motions;
              doc["n_texts"] = s.n_texts;
              doc["total_frames"] = s.total_frames;
              doc["total_hours"] = s.total_hours;
              doc["max_duration_s"] = s.max_duration_s;
              doc["min_duration_s"] = s.min_duration_s;
              doc["mean_frames"] = s.mean_frames;
              doc["median_frames"] = s.median_frames;
              doc["mode_frames"] = s.mode_frames;
              doc["words_mean"] = s.words_mean;
              doc["words_median"] = s.words_median;
              nlohmann::json hist = nlohmann::json::array();
              for (const auto& [lo, n] : s.frame_histogram) {
                hist.push_back({{"from", lo}, {"to", lo + o->bin}, {"motions", n}});
              }
              doc["frame_histogram"] = hist;
              nlohmann::json actions = nlohmann::json::array();
              for (const auto& [k, n] : s.actions_per_sequence) {
                actions.push_back({{"actions", k}, {"motions", n}});
              }
              doc["actions_per_sequence"] = actions;
              std::cout << doc.dump(2) << '\n';
              return;
            }
            Table t({"statistic", "value"});
            t.add_row({"motions", std::to_string(s.n_motions)});
            t.add_row({"texts", std::to_string(s.n_texts)});
            t.add_row({"total_frames", std::to_string(s.total_frames)});
            t.add_row({"total_hours", fixed(s.total_hours, 6)});
            t.add_row({"max_duration_s", fixed(s.max_duration_s, 2)});
            t.add_row({"min_duration_s", fixed(s.min_duration_s, 2)});
            t.add_row({"mean_frames", fixed(s.mean_frames, 2)});
            t.add_row({"median_frames", fixed(s.median_frames, 1)});
            t.add_row({"mode_frames", std::to_string(s.mode_frames)});
            t.add_row({"words_mean", fixed(s.words_mean, 2)});
            t.add_row({"words_median", fixed(s.words_median, 1)});
            t.print(std::cout);
            std::cout << '\n';
            Table h({"frames", "motions"});
            for (const auto& [lo, n] : s.frame_histogram) {
              h.add_row({std::to_string(lo) + "-" + std::to_string(lo + o->bin - 1),
                         std::to_string(n)});
            }
            h.print(std::cout);
            std::cout << '\n';
            Table a({"actions", "motions"});
            for (const auto& [k, n] : s.actions_per_sequence) {
              a.add_row({std::to_string(k), std::to_string(n)});
            }
            a.print(std::cout);
          }};
}

}  // namespace motionsplice::cli
