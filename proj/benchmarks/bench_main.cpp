#include <benchmark/benchmark.h>

#include "rigforge/detail_transfer.hpp"
#include "rigforge/mlp.hpp"
#include "rigforge/motion.hpp"
#include "rigforge/skinning.hpp"
#include "rigforge/synthetic.hpp"

using namespace rigforge;

namespace {

void BM_LbsDeform(benchmark::State& state) {
  const auto fx = make_calibration_fixture(42);
  const auto pose = forward_kinematics(fx.rig);
  for (auto _ : state) {
    auto out = lbs_deform(fx.neutral.vertices, fx.binding, pose);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * fx.neutral.vertex_count());
}
BENCHMARK(BM_LbsDeform);

void BM_ForwardKinematics(benchmark::State& state) {
  const auto fx = make_calibration_fixture(42);
  for (auto _ : state) {
    auto pose = forward_kinematics(fx.rig);
    benchmark::DoNotOptimize(pose);
  }
}
BENCHMARK(BM_ForwardKinematics);

void BM_BuildGraph(benchmark::State& state) {
  const auto lib = make_clip_library(7, 5, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto graph = build_graph(lib, 1.0, 1.0);
    benchmark::DoNotOptimize(graph);
  }
}
BENCHMARK(BM_BuildGraph)->Arg(5)->Arg(20);

void BM_ViterbiPath(benchmark::State& state) {
  const auto lib = make_clip_library(7, 5, static_cast<int>(state.range(0)));
  const auto graph = build_graph(lib, 1.0, 1.0);
  const auto audio =
      make_audio_sequence(lib, 1, static_cast<int>(state.range(1)), 3);
  for (auto _ : state) {
    auto result = viterbi_path(graph, audio, 1);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_ViterbiPath)->Args({5, 8})->Args({20, 8})->Args({20, 32});

void BM_SmoothTransition(benchmark::State& state) {
  const auto fx = make_bump_fixture(11, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto out = smooth_transition(fx.initial, fx.mask, 10, 0.5);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_SmoothTransition)->Arg(24)->Arg(48);

void BM_MlpForward(benchmark::State& state) {
  const auto model = Mlp::random_init({3, 32, 32, 3}, 5);
  const Eigen::MatrixXd batch =
      Eigen::MatrixXd::Random(3, state.range(0)).array() * 0.5 + 0.5;
  for (auto _ : state) {
    auto out = model.forward(batch);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpForward)->Arg(1)->Arg(256)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
