// SPDX-License-Identifier: Apache-2.0
//
// Serial reference vs OpenMP kernels, and serial vs parallel sweeps.
#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "fhsplit/config.hpp"
#include "fhsplit/emulation.hpp"
#include "fhsplit/kernels.hpp"
#include "fhsplit/llr.hpp"

namespace {

using namespace fhsplit;

constexpr unsigned kWidth = 5;

template <auto Fn>
void bm_generate(benchmark::State& state)
{
    std::vector<float> out(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        Fn(1, 2, out, 12.0F);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void bm_quantize(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<float> in(n);
    kernels::serial::generate_llrs(1, 2, in, 12.0F);
    std::vector<std::int16_t> out(n);
    const LlrQuantizer q(kWidth);
    for (auto _ : state) {
        Fn(in, q, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

std::vector<std::int16_t> codes(std::size_t n)
{
    std::vector<float> llrs(n);
    kernels::serial::generate_llrs(1, 2, llrs, 12.0F);
    std::vector<std::int16_t> out(n);
    kernels::serial::quantize(llrs, LlrQuantizer(kWidth), out);
    return out;
}

template <auto Fn>
void bm_pack(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto in = codes(n);
    std::vector<std::uint8_t> out(packed_size(n, kWidth));
    for (auto _ : state) {
        Fn(in, kWidth, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void bm_unpack(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto c = codes(n);
    std::vector<std::uint8_t> in(packed_size(n, kWidth));
    kernels::serial::pack_codes(c, kWidth, in);
    std::vector<std::int16_t> out(n);
    for (auto _ : state) {
        Fn(in, kWidth, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void bm_fill(benchmark::State& state)
{
    std::vector<std::uint8_t> out(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        Fn(1, 2, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetBytesProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void bm_sweep(benchmark::State& state)
{
    const CellConfig cell = preset_config("lte10");
    TrafficProfile base;
    base.duration_subframes = 200;
    const auto peak = static_cast<std::uint64_t>(rate_73_dl(cell).bps());
    const auto goodputs = goodput_grid(peak, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto reports = Parallel ? run_sweep(cell, base, goodputs, {}, 1)
                                : run_sweep_serial(cell, base, goodputs, {}, 1);
        benchmark::DoNotOptimize(reports.data());
    }
}

constexpr std::int64_t kSmall = 1 << 12;
constexpr std::int64_t kLarge = 1 << 20;

}  // namespace

BENCHMARK(bm_generate<kernels::serial::generate_llrs>)->Name("generate_llrs/serial")->Range(kSmall, kLarge);
BENCHMARK(bm_generate<kernels::omp::generate_llrs>)->Name("generate_llrs/omp")->Range(kSmall, kLarge);
BENCHMARK(bm_quantize<kernels::serial::quantize>)->Name("quantize/serial")->Range(kSmall, kLarge);
BENCHMARK(bm_quantize<kernels::omp::quantize>)->Name("quantize/omp")->Range(kSmall, kLarge);
BENCHMARK(bm_pack<kernels::serial::pack_codes>)->Name("pack_codes/serial")->Range(kSmall, kLarge);
BENCHMARK(bm_pack<kernels::omp::pack_codes>)->Name("pack_codes/omp")->Range(kSmall, kLarge);
BENCHMARK(bm_unpack<kernels::serial::unpack_codes>)->Name("unpack_codes/serial")->Range(kSmall, kLarge);
BENCHMARK(bm_unpack<kernels::omp::unpack_codes>)->Name("unpack_codes/omp")->Range(kSmall, kLarge);
BENCHMARK(bm_fill<kernels::serial::fill_bytes>)->Name("fill_bytes/serial")->Range(kSmall, kLarge);
BENCHMARK(bm_fill<kernels::omp::fill_bytes>)->Name("fill_bytes/omp")->Range(kSmall, kLarge);
BENCHMARK(bm_sweep<false>)->Name("sweep/serial")->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_sweep<true>)->Name("sweep/parallel")->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
