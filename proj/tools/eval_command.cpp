#include <algorithm>
#include <iostream>
#include <memory>

#include <json.hpp>

#include "commands.h"
#include "corpus_dir.h"
#include "motionsplice/error.h"
#include "motionsplice/metrics.h"
#include "table.h"

namespace motionsplice::cli {

namespace fs = std::filesystem;

namespace {

struct JunctionDistances {
  std::size_t count = 0;
  double max = 0.0;
  double mean = 0.0;
};

// Largest step across each traced transition window, from the frame before
// it to its last frame.
JunctionDistances junction_distances(const MotionSequence& seq, const io::TraceFile& trace) {
  JunctionDistances out;
  const std::size_t w = trace.trace.window_frames;
  double sum = 0.0;
  for (const std::size_t j : trace.trace.junction_frames) {
    if (j == 0 || j + w > seq.frame_count()) {
      throw WindowOutOfRange("trace junction " + std::to_string(j) +
                             " does not fit the sequence");
    }
    const double d = max_transition_distance(seq, j - 1, j + w);
    out.max = std::max(out.max, d);
    sum += d;
    ++out.count;
  }
  out.mean = out.count == 0 ? 0.0 : sum / static_cast<double>(out.count);
  return out;
}

nlohmann::json report_json(const ApeAveReport& r) {
  return {{"root_joint", r.root_joint},
          {"global_traj", r.global_traj},
          {"mean_local", r.mean_local},
          {"mean_global", r.mean_global}};
}

}  // namespace

Command add_eval(CLI::App& root) {
  struct Opts {
    std::uint64_t seed = 0;
    std::string in;
    std::string gt;
    std::vector<std::string> gen;
    bool json = false;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* app = root.add_subcommand(
      "eval", "Transition distance over a directory, or APE/AVE of motions against a reference");
  add_common_options(app, o->seed);
  app->add_option("--in", o->in, "Directory of sequences; reports junction distances");
  app->add_option("--gt", o->gt, "Reference motion for APE/AVE");
  app->add_option("--gen", o->gen, "Motions compared with --gt (repeatable)");
  app->add_flag("--json", o->json, "Emit JSON instead of tables");

  return {app, [o] {
            if (o->in.empty() == o->gt.empty()) {
              throw InvalidArgument("give exactly one of --in or --gt");
            }
            if (!o->gt.empty() && o->gen.empty()) {
              throw InvalidArgument("--gt needs at least one --gen");
            }
            nlohmann::json doc;
            if (!o->in.empty()) {
              Table t({"sequence", "frames", "junctions", "junction_max", "junction_mean"});
              nlohmann::json rows = nlohmann::json::array();
              std::size_t min_frames = 0;
              std::size_t n = 0;
              for (const auto& path : list_motion_files(o->in)) {
                const io::MotionFile file = io::read_motion_file(path);
                const auto trace = read_trace_if_present(path);
                const JunctionDistances d =
                    trace ? junction_distances(file.motion, *trace) : JunctionDistances{};
                const std::size_t f = file.motion.frame_count();
                min_frames = n == 0 ? f : std::min(min_frames, f);
                ++n;
                t.add_row({path.stem().string(), std::to_string(f), std::to_string(d.count),
                           fixed(d.max), fixed(d.mean)});
                rows.push_back({{"sequence", path.stem().string()},
                                {"frames", f},
                                {"junctions", d.count},
                                {"junction_max", d.max},
                                {"junction_mean", d.mean}});
              }
              if (o->json) {
                doc["sequences"] = rows;
                doc["min_frames"] = min_frames;
                std::cout << doc.dump(2) << '\n';
              } else {
                t.print(std::cout);
                std::cout << "sequences " << n << ", min frames " << min_frames << '\n';
              }
              return;
            }

            const io::MotionFile gt = io::read_motion_file(o->gt);
            Table t({"motion", "ape_root", "ape_traj", "ape_local", "ape_global", "ave_root",
                     "ave_traj", "ave_local", "ave_global", "junction_max"});
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& g : o->gen) {
              const io::MotionFile gen = io::read_motion_file(g);
              const ApeAveReport a = ape(gt.motion, gen.motion);
              const ApeAveReport v = ave(gt.motion, gen.motion);
              const auto trace = read_trace_if_present(g);
              std::string td = "-";
              nlohmann::json row = {{"motion", fs::path(g).stem().string()},
                                    {"ape", report_json(a)},
                                    {"ave", report_json(v)}};
              if (trace) {
                const JunctionDistances d = junction_distances(gen.motion, *trace);
                td = fixed(d.max);
                row["junction_max"] = d.max;
              }
              rows.push_back(row);
              t.add_row({fs::path(g).stem().string(), fixed(a.root_joint), fixed(a.global_traj),
                         fixed(a.mean_local), fixed(a.mean_global), fixed(v.root_joint, 6),
                         fixed(v.global_traj, 6), fixed(v.mean_local, 6), fixed(v.mean_global, 6),
                         td});
            }
            if (o->json) {
              doc["reference"] = fs::path(o->gt).stem().string();
              doc["rows"] = rows;
              std::cout << doc.dump(2) << '\n';
            } else {
              t.print(std::cout);
            }
          }};
}

}  // namespace motionsplice::cli
