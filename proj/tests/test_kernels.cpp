#include "generators.hpp"

#include "klab/reference.hpp"

#include <gtest/gtest.h>

#include <omp.h>

using namespace klab;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

template <class Fn>
auto with_threads(int n, Fn&& fn)
{
    const int before = omp_get_max_threads();
    omp_set_num_threads(n);
    auto out = fn();
    omp_set_num_threads(before);
    return out;
}

} // namespace

TEST(Kernels, ParallelMatchesReference)
{
    gen::Rng g(41);
    for (int i = 0; i < 40; ++i) {
        const auto spec = gen::spec(g, 24, 20);
        const auto b = eval_trilinear_B(spec), rb = reference::eval_trilinear_B(spec);
        ASSERT_LE(std::abs(b.value - rb.value), 1e-10 * std::max(1.0, std::abs(rb.value)));
        ASSERT_EQ(b.terms, rb.terms);
        ASSERT_LE(rel(eval_C1R_direct(spec), reference::eval_C1R(spec)), 1e-10);
        const u64 bb = static_cast<u64>(gen::integer(g, 1, 9));
        ASSERT_LE(rel(eval_Cb(spec, bb), reference::eval_Cb(spec, bb)), 1e-10);

        const u64 q = static_cast<u64>(gen::integer(g, 1, 25));
        const i64 a = gen::integer(g, -9, 9);
        ASSERT_LE(std::abs(eval_E(spec.alpha, spec.beta, q, a) - reference::eval_E(spec.alpha, spec.beta, q, a)),
                  1e-10 * (1 + spec.alpha.l1() * spec.beta.l1()));
        const Support moduli(DyadicRange(gen::integer(g, 1, 10)));
        ASSERT_LE(rel(eval_Delta(spec.alpha, spec.beta, moduli, a), reference::eval_Delta(spec.alpha, spec.beta, moduli, a)),
                  1e-10);
    }
}

TEST(Kernels, UVWMatchesReference)
{
    gen::Rng g(42);
    const auto psi = SmoothCutoff::standard();
    for (int i = 0; i < 20; ++i) {
        const i64 M = gen::integer(g, 2, 20);
        const auto alpha = build_sequence(kind::RandomUnit{g()}, Support(DyadicRange(M)));
        const auto beta = gen::sequence(g, 8);
        const Support moduli(DyadicRange(gen::integer(g, 2, 9)));
        const i64 a = gen::integer(g, -4, 4);
        const auto s = eval_UVW(alpha, beta, moduli, a, psi, static_cast<double>(M));
        const auto r = reference::eval_UVW(alpha, beta, moduli, a, psi, static_cast<double>(M));
        const double scale = std::max(1.0, r.U + r.W);
        ASSERT_LE(std::abs(s.U - r.U), 1e-10 * scale);
        ASSERT_LE(std::abs(s.W - r.W), 1e-10 * scale);
        ASSERT_LE(std::abs(s.V - r.V), 1e-10 * scale);
        ASSERT_EQ(s.c, r.c);
    }
}

TEST(Kernels, BitIdenticalAcrossThreadCounts)
{
    gen::Rng g(43);
    const auto psi = SmoothCutoff::standard();
    for (int i = 0; i < 10; ++i) {
        const auto spec = gen::spec(g, 32, 12);
        const Support moduli(DyadicRange(gen::integer(g, 2, 12)));
        const double M = static_cast<double>(spec.alpha.support().scale());
        auto run = [&] {
            const auto b = eval_trilinear_B(spec).value;
            const auto split = eval_UVW(spec.alpha, spec.beta, moduli, 1, psi, M);
            return std::vector<double>{b.real(),       b.imag(),      eval_C1R_direct(spec),
                                       eval_Cb(spec, 4), eval_C1R_decomposed(spec),
                                       eval_Delta(spec.alpha, spec.beta, moduli, 1),
                                       split.U,        split.W,       split.V.real(),
                                       split.direct_quadratic};
        };
        const auto one = with_threads(1, run);
        const auto many = with_threads(7, run);
        ASSERT_EQ(one, many);
    }
}
