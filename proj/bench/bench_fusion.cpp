#include <benchmark/benchmark.h>

#include "modfus/lattice.hpp"
#include "modfus/s4_dataset.hpp"

using namespace modfus;

namespace {

const ModularDatum& completed() {
  static const ModularDatum d = load_datum(default_data_dir() + "/s4_completed.mdf");
  return d;
}

void BM_S4Serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(fusion_tensor_serial(completed()));
}

void BM_S4OpenMP(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(fusion_tensor(completed(), {}, static_cast<int>(st.range(0))));
}

void BM_S4KnownBlock(benchmark::State& st) {
  ModularDatum d = load_dataset().partial;
  for (auto _ : st) benchmark::DoNotOptimize(known_block_tensor(d));
}

void BM_LatticeSerial(benchmark::State& st) {
  ModularDatum d = lattice_modular_data({static_cast<int>(st.range(0))});
  for (auto _ : st) benchmark::DoNotOptimize(fusion_tensor_serial(d));
}

void BM_LatticeOpenMP(benchmark::State& st) {
  ModularDatum d = lattice_modular_data({static_cast<int>(st.range(0))});
  for (auto _ : st) benchmark::DoNotOptimize(fusion_tensor(d));
}

void BM_CyclotomicProduct(benchmark::State& st) {
  const ModularDatum& d = completed();
  for (auto _ : st)
    for (int s = 0; s < d.size(); ++s) benchmark::DoNotOptimize(d.at(12, s) * d.at(18, s));
}

}  // namespace

BENCHMARK(BM_S4Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_S4OpenMP)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_S4KnownBlock)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LatticeSerial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LatticeOpenMP)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CyclotomicProduct);

BENCHMARK_MAIN();
