#include <benchmark/benchmark.h>

#include "irtcat/engine.hpp"
#include "irtcat/estimation.hpp"
#include "irtcat/selection.hpp"
#include "irtcat/simulation.hpp"

namespace {

using namespace irtcat;

const ItemBank& bank() {
  static const ItemBank b = generate_synthetic_bank(reference_bank_spec(7));
  return b;
}

// Pool with the first `used` items administered.
ItemPool pool_with(std::size_t used) {
  ItemPool pool(bank().size());
  for (std::size_t i = 0; i < used; ++i) pool.mark(i * 37 % bank().size());
  return pool;
}

void BM_SelectFullScan(benchmark::State& state) {
  const auto pool = pool_with(40);
  RandomStream rng(1);
  double theta = -2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_next(bank(), pool, theta, SelectionStrategy::MaxInformation, rng));
    theta = theta > 2.0 ? -2.0 : theta + 0.013;
  }
}
BENCHMARK(BM_SelectFullScan);

void BM_SelectIndexed(benchmark::State& state) {
  const auto pool = pool_with(40);
  const InformationIndex index(bank());
  RandomStream rng(1);
  double theta = -2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_next(bank(), pool, theta, SelectionStrategy::MaxInformation, rng, &index));
    theta = theta > 2.0 ? -2.0 : theta + 0.013;
  }
}
BENCHMARK(BM_SelectIndexed);

void BM_EapUpdate(benchmark::State& state) {
  const auto grid = default_grid();
  const LogLikelihoodTable table(bank(), grid);
  const bool use_table = state.range(0) != 0;
  std::size_t i = 0;
  for (auto _ : state) {
    PosteriorAccumulator acc(grid);
    for (int k = 0; k < 50; ++k, ++i) {
      const std::size_t item = i % bank().size();
      if (use_table) {
        acc.add_log_terms(table.terms(item, static_cast<int>(i & 1)));
      } else {
        acc.add(bank()[item], static_cast<int>(i & 1));
      }
      benchmark::DoNotOptimize(acc.estimate());
    }
  }
  state.SetItemsProcessed(state.iterations() * 50);
}
BENCHMARK(BM_EapUpdate)->Arg(0)->Arg(1);

void BM_Session(benchmark::State& state) {
  const auto grid = default_grid();
  const LogLikelihoodTable table(bank(), grid);
  SessionHooks hooks;
  hooks.table = &table;
  SessionConfig config;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    SimulatedRespondent r(0.5, ++seed);
    config.seed = seed;
    benchmark::DoNotOptimize(run_cat_session(bank(), r, config, hooks));
  }
}
BENCHMARK(BM_Session)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
