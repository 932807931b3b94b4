#include <benchmark/benchmark.h>

#include "magloop/center.hpp"
#include "magloop/evolution.hpp"
#include "magloop/floquet.hpp"

namespace {

void BM_cell_period(benchmark::State& state) {
  const magloop::FieldProfile profile = magloop::BiharmonicField{2.40, 2.68};
  const int spu = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(magloop::integrate_cell(profile, 0.0, 1.0, spu));
  }
}
BENCHMARK(BM_cell_period)->Arg(512)->Arg(2048)->Arg(8192);

void BM_scan_map(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(magloop::scan_map(magloop::MapFamily::biharmonic,
                                               {0.0, 6.0}, {0.0, 6.0}, res, res, 256));
  }
  state.SetItemsProcessed(state.iterations() * res * res);
}
BENCHMARK(BM_scan_map)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_forced_evolution(benchmark::State& state) {
  const magloop::FieldProfile profile = magloop::HarmonicField{2.0, 1.0};
  const magloop::Force2 force{0.1, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(magloop::evolve_affine(profile,
                                                    magloop::Geometry::cylindrical, force,
                                                    magloop::Vec4::Zero(), 10.0, 2048, 16));
  }
}
BENCHMARK(BM_forced_evolution)->Unit(benchmark::kMillisecond);

void BM_time_average(benchmark::State& state) {
  const magloop::FieldProfile profile = magloop::HarmonicField{2.0, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(magloop::time_average_matrix(
        profile, magloop::Geometry::cylindrical, 0.0, 10.0, 2048));
  }
}
BENCHMARK(BM_time_average)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
