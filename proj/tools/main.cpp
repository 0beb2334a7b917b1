#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.h"
#include "motionsplice/error.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

bool names_option(const std::string& arg, const std::string& name) {
  const std::string flag = "--" + name;
  return arg == flag || arg.rfind(flag + "=", 0) == 0;
}

// Subcommand config files are not read by CLI11 itself, so the file named by
// --config is spliced into the arguments right after the subcommand. Keys given
// on the command line win. A [subcommand] section applies to that subcommand.
std::vector<std::string> expand_config(std::vector<std::string> args, const CLI::App& sub) {
  std::string file;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i >= 2 && args[i] == "--config" && i + 1 < args.size()) {
      file = args[++i];
    } else if (i >= 2 && args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
    } else {
      kept.push_back(args[i]);
    }
  }
  if (file.empty()) {
    return args;
  }
  std::vector<std::string> extra;
  for (const CLI::ConfigItem& item : CLI::ConfigTOML().from_file(file)) {
    if (item.name == "++" || item.name == "--") {
      continue;
    }
    if (!item.parents.empty() && item.parents != std::vector<std::string>{sub.get_name()}) {
      continue;
    }
    const bool on_command_line =
        std::any_of(kept.begin() + 2, kept.end(),
                    [&](const std::string& a) { return names_option(a, item.name); });
    if (on_command_line) {
      continue;
    }
    const CLI::Option* opt = sub.get_option_no_throw("--" + item.name);
    if (opt != nullptr && opt->get_expected_min() == 0) {
      if (item.inputs.size() == 1 && CLI::detail::to_flag_value(item.inputs.front()) > 0) {
        extra.push_back("--" + item.name);
      }
      continue;
    }
    extra.push_back("--" + item.name);
    extra.insert(extra.end(), item.inputs.begin(), item.inputs.end());
  }
  kept.insert(kept.begin() + 2, extra.begin(), extra.end());
  return kept;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace motionsplice::cli;

  CLI::App app{"Assemble, refine, stitch and evaluate long text-annotated motion sequences."};
  app.name("motionsplice");
  app.require_subcommand(1, 1);

  const std::vector<Command> commands = {
      add_gen_synthetic(app), add_filter(app), add_splice(app),         add_refine_feet(app),
      add_stats(app),         add_train_stitcher(app), add_stitch(app), add_eval(app),
  };

  std::vector<std::string> args(argv, argv + argc);
  if (argc > 1 && argv[1][0] != '-') {
    const std::string name = argv[1];
    const auto it = std::find_if(commands.begin(), commands.end(),
                                 [&](const Command& c) { return c.app->get_name() == name; });
    if (it == commands.end()) {
      std::cerr << "error: unknown subcommand '" << name << "'\n\n" << app.help();
      return kExitUsage;
    }
    try {
      args = expand_config(std::move(args), *it->app);
    } catch (const CLI::ParseError& e) {
      std::cerr << "error: " << e.what() << "\n\n" << it->app->help();
      return kExitUsage;
    }
  }

  try {
    // CLI11 takes the arguments in reverse order.
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const auto selected = app.get_subcommands();
    std::cerr << (selected.empty() ? app.help() : selected.front()->help());
    return kExitUsage;
  }

  for (const auto& cmd : commands) {
    if (!cmd.app->parsed()) {
      continue;
    }
    try {
      cmd.run();
      return kExitOk;
    } catch (const motionsplice::Error& e) {
      std::cerr << cmd.app->get_name() << ": " << e.what() << '\n';
      return kExitDomain;
    } catch (const std::exception& e) {
      std::cerr << cmd.app->get_name() << ": " << e.what() << '\n';
      return kExitDomain;
    }
  }
  std::cerr << app.help();
  return kExitUsage;
}
