#include "klab/dispersion.hpp"
#include "klab/forms.hpp"
#include "klab/reference.hpp"

#include <benchmark/benchmark.h>

namespace {

klab::TrilinearSpec spec_at(klab::i64 M, klab::i64 N, klab::i64 A, klab::u64 R)
{
    auto seq = [](klab::i64 base, std::uint64_t seed) {
        return klab::build_sequence(klab::kind::RandomUnit{seed}, klab::Support(klab::DyadicRange(base)));
    };
    return {seq(M, 1), seq(N, 2), seq(A, 3), 1, R};
}

void BM_B_parallel(benchmark::State& st)
{
    const auto spec = spec_at(st.range(0), st.range(0), 16, 4);
    for (auto _ : st)
        benchmark::DoNotOptimize(klab::eval_trilinear_B(spec));
}

void BM_B_reference(benchmark::State& st)
{
    const auto spec = spec_at(st.range(0), st.range(0), 16, 4);
    for (auto _ : st)
        benchmark::DoNotOptimize(klab::reference::eval_trilinear_B(spec));
}

void BM_C1R_parallel(benchmark::State& st)
{
    const auto spec = spec_at(st.range(0), st.range(0), 16, 4);
    for (auto _ : st)
        benchmark::DoNotOptimize(klab::eval_C1R_direct(spec));
}

void BM_C1R_reference(benchmark::State& st)
{
    const auto spec = spec_at(st.range(0), st.range(0), 16, 4);
    for (auto _ : st)
        benchmark::DoNotOptimize(klab::reference::eval_C1R(spec));
}

void BM_Delta_parallel(benchmark::State& st)
{
    const auto spec = spec_at(st.range(0), 16, 1, 1);
    const klab::Support moduli(klab::DyadicRange(st.range(0) / 2));
    for (auto _ : st)
        benchmark::DoNotOptimize(klab::eval_Delta(spec.alpha, spec.beta, moduli, 1));
}

void BM_Delta_reference(benchmark::State& st)
{
    const auto spec = spec_at(st.range(0), 16, 1, 1);
    const klab::Support moduli(klab::DyadicRange(st.range(0) / 2));
    for (auto _ : st)
        benchmark::DoNotOptimize(klab::reference::eval_Delta(spec.alpha, spec.beta, moduli, 1));
}

void BM_UVW_parallel(benchmark::State& st)
{
    const auto spec = spec_at(st.range(0), 16, 1, 1);
    const klab::Support moduli(klab::DyadicRange(16));
    const auto psi = klab::SmoothCutoff::standard();
    for (auto _ : st)
        benchmark::DoNotOptimize(
            klab::eval_UVW(spec.alpha, spec.beta, moduli, 1, psi, static_cast<double>(st.range(0))));
}

void BM_UVW_reference(benchmark::State& st)
{
    const auto spec = spec_at(st.range(0), 16, 1, 1);
    const klab::Support moduli(klab::DyadicRange(16));
    const auto psi = klab::SmoothCutoff::standard();
    for (auto _ : st)
        benchmark::DoNotOptimize(
            klab::reference::eval_UVW(spec.alpha, spec.beta, moduli, 1, psi, static_cast<double>(st.range(0))));
}

} // namespace

BENCHMARK(BM_B_parallel)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_B_reference)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_C1R_parallel)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_C1R_reference)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Delta_parallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Delta_reference)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UVW_parallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_UVW_reference)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
