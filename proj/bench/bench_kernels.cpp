// Serial reference vs OpenMP kernels, plus one end-to-end shuffle at both
// worker counts. Buffer contents are fixed pseudo-random bytes so runs are
// comparable.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "cdc/engine.hpp"
#include "cdc/gf.hpp"
#include "cdc/kernels.hpp"

namespace {

cdc::Bytes random_bytes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  cdc::Bytes b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return b;
}

void BM_XorSerial(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  cdc::Bytes dst = random_bytes(n, 1), src = random_bytes(n, 2);
  for (auto _ : state) {
    cdc::kernels::serial::xor_into(dst.data(), src.data(), n);
    benchmark::DoNotOptimize(dst.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}

void BM_XorParallel(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  cdc::Bytes dst = random_bytes(n, 1), src = random_bytes(n, 2);
  for (auto _ : state) {
    cdc::kernels::xor_into(dst.data(), src.data(), n);
    benchmark::DoNotOptimize(dst.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}

void BM_AxpySerial(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const cdc::GaloisField field(cdc::FieldSpec::gf256());
  const auto* row = field.mul_row256(91);
  cdc::Bytes dst = random_bytes(n, 3), src = random_bytes(n, 4);
  for (auto _ : state) {
    cdc::kernels::serial::axpy_gf256(row, dst.data(), src.data(), n);
    benchmark::DoNotOptimize(dst.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}

void BM_AxpyParallel(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const cdc::GaloisField field(cdc::FieldSpec::gf256());
  const auto* row = field.mul_row256(91);
  cdc::Bytes dst = random_bytes(n, 3), src = random_bytes(n, 4);
  for (auto _ : state) {
    cdc::kernels::axpy_gf256(row, dst.data(), src.data(), n);
    benchmark::DoNotOptimize(dst.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}

// Map + coded shuffle of a moderate job (K=8, r=3, 56 files, 12 KiB values);
// the argument is the worker count.
void BM_MapShuffle(benchmark::State& state) {
  cdc::JobSpec spec;
  spec.node_count = 8;
  spec.function_count = 8;
  spec.file_count = 56;
  spec.computation_load = 3;
  spec.reduce_replication = 1;
  spec.value_bits = 3 << 15;  // divisible by the 24-bit round granule

  const std::size_t value_bytes = static_cast<std::size_t>(spec.value_bits / 8);
  cdc::JobFunctions jf;
  jf.map_fn = [value_bytes](std::int64_t file, const cdc::Bytes&) {
    std::vector<cdc::Bytes> values;
    values.reserve(8);
    for (int q = 1; q <= 8; ++q)
      values.push_back(random_bytes(
          value_bytes, static_cast<std::uint64_t>(file) * 131 + q));
    return values;
  };
  const std::vector<cdc::Bytes> inputs(56, cdc::Bytes{0});
  const auto files = cdc::assign_map_tasks(spec);
  const auto reduces = cdc::assign_reduce_tasks(spec);
  cdc::EngineOptions opts;
  opts.workers = static_cast<int>(state.range(0));

  std::int64_t shuffled = 0;
  for (auto _ : state) {
    auto store = cdc::run_map_phase(spec, files, jf, inputs, opts);
    const auto result = cdc::run_shuffle(spec, files, reduces, store,
                                         cdc::ShuffleStrategy::kCoded, opts);
    shuffled = result.report.total_bits;
    benchmark::DoNotOptimize(shuffled);
  }
  state.counters["shuffle_bits"] =
      benchmark::Counter(static_cast<double>(shuffled));
}

}  // namespace

BENCHMARK(BM_XorSerial)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 23);
BENCHMARK(BM_XorParallel)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 23);
BENCHMARK(BM_AxpySerial)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 23);
BENCHMARK(BM_AxpyParallel)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20)->Arg(1 << 23);
BENCHMARK(BM_MapShuffle)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
