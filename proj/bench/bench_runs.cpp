// Serial reference against the OpenMP run loop on short shaped experiments.

#include <benchmark/benchmark.h>

#include <memory>

#include "ethics/experiment.hpp"
#include "ethics/synth.hpp"

using namespace ethics;

namespace {

ExperimentConfig bench_config(EnvKind kind, bool shaped) {
  ExperimentConfig cfg;
  cfg.env.kind = kind;
  cfg.runs = 8;
  cfg.episodes = kind == EnvKind::Grab ? 300 : 100;
  cfg.learner.epsilon_final = 0.0;
  cfg.learner.epsilon_decay_episodes = cfg.episodes;
  if (shaped) {
    Rng rng(7);
    const HumanDataset data = kind == EnvKind::Grab
                                  ? synth_grab(cfg.env.layout, 500, rng)
                                  : synth_driving(cfg.env.driving, 100, rng);
    cfg.shaping = ShapingSetup{
        ShapingConfig{},
        std::make_shared<const HumanPolicy>(human_policy(ingest(data), 0.95, DeltaScale::UnitMax))};
  }
  return cfg;
}

template <ExperimentResult (*Run)(const ExperimentConfig&, std::uint64_t)>
void runs(benchmark::State& state) {
  const auto cfg = bench_config(static_cast<EnvKind>(state.range(0)), state.range(1) != 0);
  for (auto _ : state) benchmark::DoNotOptimize(Run(cfg, 1));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cfg.runs * cfg.episodes));
}

void args(benchmark::internal::Benchmark* b) {
  b->ArgNames({"env", "shaped"})->Unit(benchmark::kMillisecond);
  for (int env : {0, 1}) {
    for (int shaped : {0, 1}) b->Args({env, shaped});
  }
}

}  // namespace

BENCHMARK(runs<run_experiment_serial>)->Name("serial")->Apply(args);
BENCHMARK(runs<run_experiment>)->Name("parallel")->Apply(args);

BENCHMARK_MAIN();
