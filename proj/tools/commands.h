#pragma once

#include <cstdint>
#include <functional>

#include <CLI11.hpp>

namespace motionsplice::cli {

// A registered subcommand and the action to run once it has been parsed.
struct Command {
  CLI::App* app = nullptr;
  std::function<void()> run;
};

// Adds --seed and --config (TOML/INI with this subcommand's long option
// names as keys) to a subcommand.
void add_common_options(CLI::App* app, std::uint64_t& seed);

Command add_gen_synthetic(CLI::App& root);
Command add_filter(CLI::App& root);
Command add_splice(CLI::App& root);
Command add_refine_feet(CLI::App& root);
Command add_stats(CLI::App& root);
Command add_train_stitcher(CLI::App& root);
Command add_stitch(CLI::App& root);
Command add_eval(CLI::App& root);

}  // namespace motionsplice::cli
