#include <benchmark/benchmark.h>

#include <filesystem>

#include "locasim/locasim.hpp"

using namespace locasim;

namespace {

const AutomatonSpec& seed() {
  static const AutomatonSpec ca = load_ca(std::filesystem::path(LOCASIM_DATA_DIR) / "cube6.ca");
  return ca;
}

const AutomatonSpec& solution() {
  static const AutomatonSpec ca = [] {
    LocalMapping m = handcraft_script(seed());
    apply_patch(m, load_patch(std::filesystem::path(LOCASIM_DATA_DIR) / "handcraft.patch", m));
    return build_simulated_ca(m, collect_supers(seed(), 400, 100));
  }();
  return ca;
}

void BM_RunDiagram(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_diagram(seed(), T));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>((T + 1) * (T + 2)));
}
BENCHMARK(BM_RunDiagram)->Arg(130)->Arg(400)->Arg(1000);

void BM_CollectSupers(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(collect_supers(seed(), T, 100));
}
BENCHMARK(BM_CollectSupers)->Arg(130)->Arg(400);

void BM_InduceRelation(benchmark::State& state) {
  const auto sup = collect_supers(solution(), 400, 100);
  const auto m = identity_mapping(solution());
  for (auto _ : state) benchmark::DoNotOptimize(induce_relation(m, sup));
}
BENCHMARK(BM_InduceRelation);

void BM_CanonicalKey(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(canonical_key(solution()));
}
BENCHMARK(BM_CanonicalKey);

void BM_Explore(benchmark::State& state) {
  ExplorationConfig cfg;
  cfg.seed = solution();
  cfg.node_budget = static_cast<std::size_t>(state.range(0));
  cfg.workers = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(explore(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Explore)->Args({2000, 1})->Args({2000, 4})->Unit(benchmark::kMillisecond);

void BM_Verify(benchmark::State& state) {
  const auto cube = SequenceSpec::of(SequenceKind::cube);
  for (auto _ : state) benchmark::DoNotOptimize(verify_solution(solution(), cube, 130));
}
BENCHMARK(BM_Verify);

}  // namespace

BENCHMARK_MAIN();
