#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "nfsar/kernels.hpp"
#include "nfsar/simulate.hpp"

namespace {

using namespace nfsar;

const PsfBank& bank_for(std::size_t n) {
  static std::map<std::size_t, PsfBank> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_psf_bank(default_geometry(n))).first;
  return it->second;
}

ComplexImage random_image(const GridSpec& grid) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  ComplexImage img(grid);
  for (auto& s : img.data()) s = {normal(rng), normal(rng)};
  return img;
}

void BM_Adjoint(benchmark::State& state, Execution execution) {
  const PsfBank& bank = bank_for(static_cast<std::size_t>(state.range(0)));
  const ComplexImage img = random_image(bank.geometry().grid);
  ComplexImage out(bank.geometry().grid);
  for (auto _ : state) {
    kernels::adjoint(bank, img, out, execution);
    benchmark::DoNotOptimize(out.data().data());
  }
}

void BM_Apply(benchmark::State& state, Execution execution) {
  const PsfBank& bank = bank_for(static_cast<std::size_t>(state.range(0)));
  const ComplexImage img = random_image(bank.geometry().grid);
  ComplexImage out(bank.geometry().grid);
  for (auto _ : state) {
    kernels::apply(bank, img, out, execution);
    benchmark::DoNotOptimize(out.data().data());
  }
}

void BM_BuildBank(benchmark::State& state, Execution execution) {
  const ImagingGeometry geometry = default_geometry(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    PsfBank bank = build_psf_bank(geometry, {}, {}, execution);
    benchmark::DoNotOptimize(bank.size());
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_Adjoint, serial, Execution::serial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Adjoint, parallel, Execution::parallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Apply, serial, Execution::serial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Apply, parallel, Execution::parallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BuildBank, serial, Execution::serial)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BuildBank, parallel, Execution::parallel)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
