#include <benchmark/benchmark.h>

#include "cgen/idgen.hpp"
#include "cgen/scm.hpp"

using namespace cgen;

namespace {

const CatalogEntry& napkin() {
  static const auto entries = catalog();
  return catalog_entry(entries, "napkin");
}

const Dataset& observations() {
  static const Dataset d = sample_observational(napkin().scm, 1000000, 1);
  return d;
}

const SamplingNetwork& network() {
  static const SamplingNetwork h = [] {
    auto r = idgen({"Y"}, {"W1"}, napkin().scm.graph(), TrainingData(observations()));
    return r.network();
  }();
  return h;
}

void BM_CountSerial(benchmark::State& state) {
  const Dataset& d = observations();
  const int cols[] = {0, 1, 2, 3};
  for (auto _ : state) benchmark::DoNotOptimize(kernels::count_configurations_serial(d, cols));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.rows()));
}

void BM_CountParallel(benchmark::State& state) {
  const Dataset& d = observations();
  const int cols[] = {0, 1, 2, 3};
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::count_configurations(d, cols, workers));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.rows()));
}

void BM_AncestralSerial(benchmark::State& state) {
  const SamplingNetwork& h = network();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ancestral_sample_reference(h, {{"W1", 1}}, n, 3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_AncestralParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int workers = static_cast<int>(state.range(1));
  const SamplingNetwork& h = network();
  for (auto _ : state) benchmark::DoNotOptimize(ancestral_sample(h, {{"W1", 1}}, n, 3, workers));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ScmSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sample_observational_reference(napkin().scm, n, 5));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ScmParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(sample_observational(napkin().scm, n, 5, workers));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_CountSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AncestralSerial)->Arg(200000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AncestralParallel)->Args({200000, 1})->Args({200000, 2})->Args({200000, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScmSerial)->Arg(200000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScmParallel)->Args({200000, 1})->Args({200000, 2})->Args({200000, 4})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
