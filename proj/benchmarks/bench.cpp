#include <benchmark/benchmark.h>

#include "nocsec/adversary.hpp"
#include "nocsec/aont.hpp"
#include "nocsec/codec.hpp"
#include "nocsec/quasigroup.hpp"
#include "nocsec/routing.hpp"
#include "nocsec/simulator.hpp"

using namespace nocsec;

namespace {

std::vector<std::uint8_t> message(std::size_t len) {
  std::vector<std::uint8_t> m(len);
  for (std::size_t i = 0; i < len; ++i) m[i] = static_cast<std::uint8_t>(i * 131 + 7);
  return m;
}

void BM_QuasigroupGenerate(benchmark::State& state) {
  const auto params = AontParams::for_prime(static_cast<std::uint32_t>(state.range(0)));
  const auto key = random_key(1, params);
  for (auto _ : state) benchmark::DoNotOptimize(Quasigroup::generate(key, params));
}
BENCHMARK(BM_QuasigroupGenerate)->Arg(17)->Arg(257)->Arg(65537);

void BM_Transform(benchmark::State& state) {
  const auto params = AontParams::for_prime(static_cast<std::uint32_t>(state.range(0)));
  const auto msg = message(static_cast<std::size_t>(state.range(1)));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(transform(msg, params, ++seed));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(1));
}
BENCHMARK(BM_Transform)->Args({17, 64})->Args({17, 4096})->Args({257, 4096})->Args({65537, 1 << 18});

void BM_Inverse(benchmark::State& state) {
  const auto params = AontParams::for_prime(static_cast<std::uint32_t>(state.range(0)));
  const auto ct = transform(message(static_cast<std::size_t>(state.range(1))), params, 5);
  for (auto _ : state) benchmark::DoNotOptimize(inverse(ct));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(1));
}
BENCHMARK(BM_Inverse)->Args({17, 64})->Args({17, 4096})->Args({257, 4096});

void BM_CodecEncodeDecode(benchmark::State& state) {
  const auto [a, b] = packetize(transform(message(4096), AontParams::for_prime(17), 2), 1);
  for (auto _ : state) benchmark::DoNotOptimize(codec::decode_part(codec::encode_part(b)));
}
BENCHMARK(BM_CodecEncodeDecode);

void BM_PlanRoutes(benchmark::State& state) {
  const MeshDims dims{8, 8};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const int s = static_cast<int>(seed % 64);
    const int d = static_cast<int>((seed * 7 + 3) % 64);
    ++seed;
    if (s == d) continue;
    benchmark::DoNotOptimize(plan_routes(dims.coord(s), dims.coord(d), dims, seed));
  }
}
BENCHMARK(BM_PlanRoutes);

void BM_EvaluateCoalition4x4(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(evaluate({4, 4}, Defense::Aont, 2, 1));
}
BENCHMARK(BM_EvaluateCoalition4x4)->Unit(benchmark::kMillisecond);

void BM_SimulatorLowLoad(benchmark::State& state) {
  SimConfig c;
  c.security_mode = static_cast<SecurityMode>(state.range(0));
  c.warmup_cycles = 0;
  c.measure_cycles = 2000;
  for (auto _ : state) benchmark::DoNotOptimize(run(c));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 2000);
}
BENCHMARK(BM_SimulatorLowLoad)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
