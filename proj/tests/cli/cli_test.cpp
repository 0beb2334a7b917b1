#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "motionsplice/io/motion_file.h"
#include "motionsplice/io/trace_file.h"

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string output;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(MOTIONSPLICE_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  CliRun r;
  if (pipe == nullptr) {
    return r;
  }
  std::array<char, 4096> buf{};
  while (const std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) {
    r.output.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("motionsplice_cli_" + std::string(::testing::UnitTest::GetInstance()
                                                  ->current_test_info()
                                                  ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::size_t count_files(const std::string& sub, const std::string& ext) const {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir_ / sub)) {
      n += e.path().extension() == ext ? 1 : 0;
    }
    return n;
  }

  fs::path dir_;
};

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  const CliRun unknown = run("frobnicate");
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.output.find("unknown subcommand 'frobnicate'"), std::string::npos);
  EXPECT_EQ(run("splice").code, 2);  // missing required options
  EXPECT_EQ(run("gen-synthetic --out x --count notanumber").code, 2);
  EXPECT_EQ(run("gen-synthetic --out x --bogus").code, 2);
}

TEST_F(Cli, HelpExitsZero) {
  const CliRun help = run("--help");
  EXPECT_EQ(help.code, 0);
  for (const char* sub : {"gen-synthetic", "filter", "splice", "refine-feet", "stats",
                          "train-stitcher", "stitch", "eval"}) {
    EXPECT_NE(help.output.find(sub), std::string::npos) << sub;
    const CliRun h = run(std::string(sub) + " --help");
    EXPECT_EQ(h.code, 0) << sub;
    EXPECT_NE(h.output.find("--seed"), std::string::npos) << sub;
    EXPECT_NE(h.output.find("--config"), std::string::npos) << sub;
  }
}

TEST_F(Cli, DomainErrorsExitOne) {
  const CliRun missing = run("filter --in " + path("nope") + " --out " + path("out"));
  EXPECT_EQ(missing.code, 1) << missing.output;
  EXPECT_EQ(run("gen-synthetic --out " + path("c") + " --min-frames 5").code, 1);
  EXPECT_EQ(run("gen-synthetic --out " + path("c") + " --styles dance").code, 1);
  EXPECT_EQ(run("eval").code, 1);
}

TEST_F(Cli, ConfigFileSuppliesOptions) {
  {
    std::ofstream cfg(path("gen.toml"));
    cfg << "count = 7\nmin-frames = 20\nmax-frames = 30\nseed = 4\n";
  }
  const CliRun r = run("gen-synthetic --config " + path("gen.toml") + " --out " + path("c"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_EQ(count_files("c", ".motion"), 7u);
  for (const auto& e : fs::directory_iterator(dir_ / "c")) {
    const auto f = motionsplice::io::read_motion_file(e.path());
    EXPECT_GE(f.motion.frame_count(), 20u);
    EXPECT_LE(f.motion.frame_count(), 30u);
  }
  const CliRun explicit_count =
      run("gen-synthetic --config " + path("gen.toml") + " --count 3 --out " + path("e"));
  ASSERT_EQ(explicit_count.code, 0) << explicit_count.output;
  EXPECT_EQ(count_files("e", ".motion"), 3u);
  const CliRun missing = run("gen-synthetic --config " + path("none.toml") + " --out " + path("d"));
  EXPECT_EQ(missing.code, 2);
}

TEST_F(Cli, SeedMakesOutputReproducible) {
  ASSERT_EQ(run("gen-synthetic --count 5 --seed 9 --out " + path("a")).code, 0);
  ASSERT_EQ(run("gen-synthetic --count 5 --seed 9 --out " + path("b")).code, 0);
  ASSERT_EQ(run("gen-synthetic --count 5 --seed 10 --out " + path("c")).code, 0);
  for (const auto& e : fs::directory_iterator(dir_ / "a")) {
    const auto name = e.path().filename();
    EXPECT_EQ(motionsplice::io::read_text(e.path()),
              motionsplice::io::read_text(dir_ / "b" / name));
  }
  EXPECT_NE(motionsplice::io::read_text(dir_ / "a" / "clip_0000.motion"),
            motionsplice::io::read_text(dir_ / "c" / "clip_0000.motion"));
}

TEST_F(Cli, CorpusPipeline) {
  ASSERT_EQ(run("gen-synthetic --count 60 --seed 2 --out " + path("clips")).code, 0);
  const CliRun filtered =
      run("filter --in " + path("clips") + " --out " + path("kept") + " --min-frames 100");
  ASSERT_EQ(filtered.code, 0) << filtered.output;
  for (const auto& e : fs::directory_iterator(dir_ / "kept")) {
    EXPECT_GE(motionsplice::io::read_motion_file(e.path()).motion.frame_count(), 100u);
  }

  const CliRun spliced =
      run("splice --attempts 20 --seed 3 --in " + path("clips") + " --out " + path("long"));
  ASSERT_EQ(spliced.code, 0) << spliced.output;
  const std::size_t n = count_files("long", ".motion");
  ASSERT_GT(n, 0u);
  EXPECT_EQ(count_files("long", ".json"), n);
  EXPECT_EQ(count_files("long", ".txt"), n);

  const CliRun eval = run("eval --json --in " + path("long"));
  ASSERT_EQ(eval.code, 0) << eval.output;
  const auto doc = nlohmann::json::parse(eval.output);
  EXPECT_GE(doc["min_frames"].get<std::size_t>(), 600u);
  ASSERT_EQ(doc["sequences"].size(), n);
  for (const auto& row : doc["sequences"]) {
    EXPECT_GE(row["frames"].get<std::size_t>(), 600u);
    EXPECT_LE(row["frames"].get<std::size_t>(), 935u);
    EXPECT_GE(row["junctions"].get<std::size_t>(), 1u);
  }

  const CliRun refined = run("refine-feet --in " + path("long") + " --out " + path("refined"));
  ASSERT_EQ(refined.code, 0) << refined.output;
  EXPECT_EQ(count_files("refined", ".motion"), n);
  EXPECT_EQ(count_files("refined", ".json"), n);

  const CliRun stats = run("stats --json --in " + path("refined"));
  ASSERT_EQ(stats.code, 0) << stats.output;
  EXPECT_EQ(nlohmann::json::parse(stats.output)["n_motions"].get<std::size_t>(), n);

  const CliRun ape = run("eval --gt " + path("long/long_0000.motion") + " --gen " +
                      path("refined/long_0000.motion"));
  EXPECT_EQ(ape.code, 0) << ape.output;
  EXPECT_NE(ape.output.find("ape_root"), std::string::npos);
}

TEST_F(Cli, TrainAndStitchLengths) {
  ASSERT_EQ(run("gen-synthetic --count 6 --seed 5 --out " + path("clips")).code, 0);
  const CliRun train = run("train-stitcher --in " + path("clips") + " --out " + path("m.ckpt") +
                        " --window 20 --windows 16 --epochs 2 --hidden 8 --steps 10 --loss-csv " +
                        path("loss.csv"));
  ASSERT_EQ(train.code, 0) << train.output;
  const std::string csv = motionsplice::io::read_text(path("loss.csv"));
  EXPECT_EQ(csv.substr(0, 16), "epoch,mean_loss\n");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);

  const std::string prev = path("clips/clip_0000.motion");
  const std::string next = path("clips/clip_0001.motion");
  const auto fp = motionsplice::io::read_motion_file(prev).motion.frame_count();
  const auto fn = motionsplice::io::read_motion_file(next).motion.frame_count();
  for (const std::size_t len : {5u, 10u}) {
    const std::string out = path("s" + std::to_string(len) + ".motion");
    const CliRun s = run("stitch --model " + path("m.ckpt") + " --prev " + prev + " --next " +
                         next + " --out " + out + " --frames " + std::to_string(len) +
                         " --condition walk");
    ASSERT_EQ(s.code, 0) << s.output;
    const auto f = motionsplice::io::read_motion_file(out);
    EXPECT_EQ(f.motion.frame_count(), fp + fn + len);
    ASSERT_TRUE(f.script.has_value());
    EXPECT_EQ(f.script->markers(), (std::vector<std::size_t>{fp, fp + len, fp + fn + len}));
    const auto trace = motionsplice::io::read_trace_file(path("s" + std::to_string(len) +
                                                              ".trace.json"));
    EXPECT_EQ(trace.trace.junction_frames, (std::vector<std::size_t>{fp}));
    EXPECT_EQ(trace.trace.window_frames, len);
  }
  EXPECT_EQ(run("stitch --model " + path("m.ckpt") + " --prev " + prev + " --next " + next +
                " --out " + path("x.motion") + " --frames 19")
                .code,
            1);
  EXPECT_EQ(run("stitch --model " + path("m.ckpt") + " --prev " + prev + " --next " + next +
                " --out " + path("x.motion") + " --condition dance")
                .code,
            1);
  EXPECT_EQ(run("stitch --model " + path("missing.ckpt") + " --prev " + prev + " --next " + next +
                " --out " + path("x.motion"))
                .code,
            1);
}

}  // namespace
