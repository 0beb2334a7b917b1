#include <benchmark/benchmark.h>

#include <vector>

#include "motionsplice/bezier.h"
#include "motionsplice/foot_refine.h"
#include "motionsplice/io/motion_file.h"
#include "motionsplice/splice.h"
#include "motionsplice/synthetic.h"

namespace motionsplice {
namespace {

std::vector<AnnotatedMotion> corpus(std::size_t count) {
  std::vector<AnnotatedMotion> out;
  for (const auto& r : make_recipes(count, 50, 200, kAllStyles, 1)) {
    out.push_back(generate_clip(r));
  }
  return out;
}

void BM_GenerateClip(benchmark::State& state) {
  SyntheticRecipe r;
  r.n_frames = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_clip(r));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateClip)->Arg(50)->Arg(200);

void BM_BuildTransition(benchmark::State& state) {
  const auto clips = corpus(2);
  SpliceConfig cfg;
  const auto aligned = root_align(clips[0].motion(), clips[1].motion());
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_transition(clips[0].motion(), aligned, cfg));
  }
}
BENCHMARK(BM_BuildTransition);

void BM_SplicePair(benchmark::State& state) {
  const auto clips = corpus(2);
  SpliceConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(splice_pair(clips[0], clips[1], cfg));
  }
}
BENCHMARK(BM_SplicePair);

void BM_AssembleLong(benchmark::State& state) {
  const auto clips = corpus(200);
  SpliceConfig cfg;
  cfg.chain_attempts = 20;
  cfg.threads = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_long(clips, cfg));
  }
}
BENCHMARK(BM_AssembleLong)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_BezierEval(benchmark::State& state) {
  const BezierArc arc{{0, 0, 0}, {0.5, 0.05, 0.1}, {1, 0, 0.2}};
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bezier_eval(arc, t));
    t = t >= 1.0 ? 0.0 : t + 1.0 / 64.0;
  }
}
BENCHMARK(BM_BezierEval);

void BM_RefineFeet(benchmark::State& state) {
  const auto clips = corpus(2);
  SpliceConfig scfg;
  const auto spliced = splice_pair(clips[0], clips[1], scfg);
  FootRefineConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        refine_transition_feet(spliced.result.motion(), spliced.junction, 10, cfg));
  }
}
BENCHMARK(BM_RefineFeet);

void BM_MotionFileRoundTrip(benchmark::State& state) {
  SyntheticRecipe r;
  r.n_frames = 200;
  const auto file = io::MotionFile::from(generate_clip(r));
  for (auto _ : state) {
    benchmark::DoNotOptimize(io::parse_motion(io::serialize_motion(file)));
  }
}
BENCHMARK(BM_MotionFileRoundTrip)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace motionsplice
