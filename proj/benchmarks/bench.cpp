// Microbenchmarks for the hot paths: trace generation, feature encoding,
// split search, and model training.  Build with Release; run ./wfp_bench.

#include <cstdint>
#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "wfp/eval.hpp"
#include "wfp/features.hpp"
#include "wfp/model.hpp"
#include "wfp/rng.hpp"
#include "wfp/synth.hpp"
#include "wfp/trace.hpp"

namespace {

wfp::GeneratorConfig bench_generator(int days, double jobs_per_day) {
  wfp::GeneratorConfig cfg;
  cfg.seed = 17;
  cfg.days = days;
  cfg.jobs_per_day_mean = jobs_per_day;
  cfg.n_users = 16;
  cfg.n_nodes = 64;
  cfg.n_racks = 8;
  return cfg;
}

wfp::Dataset random_dataset(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  wfp::Rng rng(seed);
  wfp::Dataset ds;
  ds.rows.resize(n, d);
  ds.labels.resize(static_cast<std::size_t>(n));
  ds.row_provenance.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) ds.rows(i, j) = rng.uniform(-2.0, 2.0);
    const bool fail = ds.rows(i, 0) > 0.8 ? true : rng.bernoulli(0.3);
    ds.labels[static_cast<std::size_t>(i)] = fail ? 1 : 0;
    ds.row_provenance[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
  }
  ds.schema.mode = wfp::FeatureMode::runtime;
  for (Eigen::Index j = 0; j < d; ++j) {
    const std::string name = "x" + std::to_string(j);
    ds.schema.numeric_columns.push_back(name);
    ds.schema.numeric_stats[name] = wfp::NumericStat{0.0, 1.0};
  }
  ds.schema.output_dimension = static_cast<std::size_t>(d);
  return ds;
}

void BM_generate_trace(benchmark::State& state) {
  const auto cfg = bench_generator(static_cast<int>(state.range(0)), 500.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wfp::generate_trace(cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 500);
}
BENCHMARK(BM_generate_trace)->Arg(2)->Arg(8);

void BM_encode_runtime(benchmark::State& state) {
  const wfp::RecordSet rs =
      wfp::filter_records(wfp::generate_trace(bench_generator(4, 500.0)));
  const wfp::FeatureSchema schema = wfp::fit_schema(rs, wfp::FeatureMode::runtime, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wfp::encode(rs, schema));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rs.records.size()));
}
BENCHMARK(BM_encode_runtime);

void BM_best_split(benchmark::State& state) {
  const wfp::Dataset ds = random_dataset(state.range(0), 8, 23);
  std::vector<int> rows(static_cast<std::size_t>(ds.size()));
  std::iota(rows.begin(), rows.end(), 0);
  std::vector<int> features(8);
  std::iota(features.begin(), features.end(), 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wfp::best_split(ds.rows, ds.labels, rows, features));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_best_split)->Arg(256)->Arg(4096);

void BM_train_tree(benchmark::State& state) {
  const wfp::Dataset ds = random_dataset(state.range(0), 8, 29);
  wfp::ModelSpec spec;
  spec.kind = wfp::ModelKind::dt;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wfp::train(spec, ds));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_train_tree)->Arg(1024)->Arg(8192);

void BM_train_forest(benchmark::State& state) {
  const wfp::Dataset ds = random_dataset(2048, 8, 31);
  wfp::ModelSpec spec;
  spec.rf_n_trees = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(wfp::train(spec, ds));
  }
}
BENCHMARK(BM_train_forest)->Arg(10)->Arg(50);

void BM_predict_forest(benchmark::State& state) {
  const wfp::Dataset ds = random_dataset(4096, 8, 37);
  wfp::ModelSpec spec;
  spec.rf_n_trees = 50;
  const wfp::TrainedModel model = wfp::train(spec, ds);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wfp::predict_all(model, ds.rows));
  }
  state.SetItemsProcessed(state.iterations() * ds.size());
}
BENCHMARK(BM_predict_forest);

}  // namespace

BENCHMARK_MAIN();
