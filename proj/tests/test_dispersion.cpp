#include "generators.hpp"
#include "oracle.hpp"

#include "klab/dispersion.hpp"
#include "klab/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace klab;

namespace {

CoefficientSequence on(const SequenceKind& k, i64 base) { return build_sequence(k, Support(DyadicRange(base))); }
CoefficientSequence ones(std::vector<i64> idx) { return build_sequence(kind::Ones{}, Support::of(std::move(idx))); }

struct NaiveSplit {
    long double U = 0, W = 0;
    oracle::cld V = 0;
    std::vector<int> c;
};

// X_m and Y_m straight from their definitions, over every m in the cutoff support
NaiveSplit naive_uvw(const CoefficientSequence& alpha, const CoefficientSequence& beta, const Support& moduli, i64 a,
                     const SmoothCutoff& psi, double M)
{
    NaiveSplit out;
    std::vector<std::pair<u64, int>> cs;
    for (i64 qi : moduli.indices()) {
        const u64 q = static_cast<u64>(qi);
        int c = 0;
        if (std::gcd(oracle::mod(a, q), q) == 1)
            c = oracle::E(alpha, beta, q, a).real() >= 0 ? 1 : -1;
        out.c.push_back(c);
        cs.emplace_back(q, c);
    }
    const auto lo = static_cast<i64>(std::floor(psi.support_lo() * M)) + 1;
    const auto hi = static_cast<i64>(std::ceil(psi.support_hi() * M)) - 1;
    for (i64 m = lo; m <= hi; ++m) {
        const long double w = psi.value(static_cast<long double>(m) / M);
        if (w <= 0)
            continue;
        oracle::cld X = 0, Y = 0;
        for (auto [q, c] : cs) {
            if (c == 0)
                continue;
            for (std::size_t j = 0; j < beta.size(); ++j) {
                const u64 mn = static_cast<u64>(m * beta.indices()[j]);
                const oracle::cld b = oracle::to_ld(beta.values()[j]);
                if (mn % q == oracle::mod(a, q))
                    X += static_cast<long double>(c) * b;
                if (std::gcd(mn, q) == 1)
                    Y += static_cast<long double>(c) * b / static_cast<long double>(oracle::phi(q));
            }
        }
        out.U += w * std::norm(Y);
        out.W += w * std::norm(X);
        out.V += w * X * std::conj(Y);
    }
    return out;
}

} // namespace

TEST(EvalE, Examples)
{
    const auto s = ones({3, 4});
    EXPECT_NEAR(std::abs(eval_E(s, s, 5, 1)), 0.0, 1e-15);
    const auto a = on(kind::Moebius{}, 20), b = on(kind::TauK{2}, 10);
    EXPECT_NEAR(std::abs(eval_E(a, b, 1, 0)), 0.0, 1e-12);
    const auto zero = build_sequence(kind::Explicit{}, Support(DyadicRange(8)));
    EXPECT_EQ(eval_E(a, zero, 7, 3), cd(0, 0));
    EXPECT_THROW(eval_E(a, b, 0, 1), std::invalid_argument);
}

TEST(EvalE, PropertyMatchesOracle)
{
    gen::Rng g(31);
    for (int i = 0; i < 200; ++i) {
        const auto alpha = gen::sequence(g, 40), beta = gen::sequence(g, 20);
        const u64 q = static_cast<u64>(gen::integer(g, 1, 30));
        const i64 a = gen::integer(g, -40, 40);
        const auto got = eval_E(alpha, beta, q, a);
        const auto want = oracle::E(alpha, beta, q, a);
        ASSERT_NEAR(got.real(), static_cast<double>(want.real()), 1e-10 * (1 + std::abs(want))) << q << " " << a;
        ASSERT_NEAR(got.imag(), static_cast<double>(want.imag()), 1e-10 * (1 + std::abs(want)));
    }
}

TEST(EvalDelta, Examples)
{
    const auto s = ones({3, 4});
    EXPECT_EQ(eval_Delta(s, s, Support::of({4, 6, 8}), 2), 0.0);
    EXPECT_NEAR(eval_Delta(s, s, Support::of({5}), 1), 0.0, 1e-15);

    const auto a = on(kind::Ones{}, 4), b = on(kind::Ones{}, 4);
    long double want = 0;
    for (u64 q = 5; q <= 8; ++q)
        want += std::abs(oracle::E(a, b, q, 1));
    EXPECT_NEAR(eval_Delta(a, b, Support(DyadicRange(4)), 1), static_cast<double>(want), 1e-12);
}

TEST(Cutoff, ShapeAndValidation)
{
    const auto psi = SmoothCutoff::standard();
    EXPECT_EQ(psi(0.5), 0.0);
    EXPECT_EQ(psi(2.5), 0.0);
    EXPECT_EQ(psi(1.0), 1.0);
    EXPECT_EQ(psi(1.7), 1.0);
    EXPECT_NEAR(psi(0.75), 0.5, 1e-15);
    EXPECT_NEAR(psi(2.25), 0.5, 1e-15);
    EXPECT_TRUE(psi.majorizes_dyadic());
    for (double x = 0.5; x < 1.0; x += 0.01)
        EXPECT_LE(psi(x), psi(x + 0.01) + 1e-15);
    EXPECT_FALSE(SmoothCutoff(0.5, 1.1, 2.0, 2.5).majorizes_dyadic());
    EXPECT_THROW(SmoothCutoff(1.0, 1.0, 2.0, 2.5), std::invalid_argument);
    EXPECT_THROW(SmoothCutoff(0.5, 1.0, 2.0, 2.5, 0.0), std::invalid_argument);
    EXPECT_TRUE(SmoothCutoff::zero().is_zero());
    EXPECT_EQ(SmoothCutoff::zero()(1.5), 0.0);
}

TEST(Cutoff, FourierAgainstTrapezoid)
{
    const auto psi = SmoothCutoff::standard();
    EXPECT_NEAR(static_cast<double>(psi.fourier(0).real()), 1.5, 1e-15);
    const int n = 200000;
    const long double h = 2.0L / n;
    for (long double xi : {0.1L, 0.37L, 1.0L, 2.5L, 7.3L}) {
        std::complex<long double> s = 0;
        for (int k = 0; k <= n; ++k) {
            const long double x = 0.5L + k * h;
            s += (k == 0 || k == n ? 0.5L : 1.0L) * psi.value(x) * oracle::e(-x * xi);
        }
        s *= h;
        const auto f = psi.fourier(xi);
        EXPECT_NEAR(static_cast<double>(f.real()), static_cast<double>(s.real()), 1e-9) << static_cast<double>(xi);
        EXPECT_NEAR(static_cast<double>(f.imag()), static_cast<double>(s.imag()), 1e-9);
        const auto neg = psi.fourier(-xi);
        EXPECT_NEAR(static_cast<double>(neg.real()), static_cast<double>(f.real()), 1e-13);
        EXPECT_NEAR(static_cast<double>(neg.imag()), -static_cast<double>(f.imag()), 1e-13);
    }
    // symmetric about 3/2 with period 2/3 zeros of the phase-free part
    EXPECT_NEAR(std::abs(static_cast<double>(psi.fourier(2.0L / 3).real())), 0.0, 1e-12);
}

TEST(Cutoff, ConcurrentCacheIsConsistent)
{
    const auto psi = SmoothCutoff::standard();
    const auto copy = psi;
    std::vector<std::complex<long double>> serial(64), parallel(64);
    for (int i = 0; i < 64; ++i)
        serial[static_cast<std::size_t>(i)] = SmoothCutoff::standard().fourier(0.25L * i);
#pragma omp parallel for num_threads(4)
    for (int i = 0; i < 64; ++i)
        parallel[static_cast<std::size_t>(i)] = (i % 2 ? psi : copy).fourier(0.25L * i);
    EXPECT_EQ(serial, parallel);
}

TEST(EvalUVW, ZeroCases)
{
    const auto psi = SmoothCutoff::standard();
    const auto alpha = on(kind::Ones{}, 4);
    const auto zero = build_sequence(kind::Explicit{}, Support(DyadicRange(4)));
    const auto s = eval_UVW(alpha, zero, Support(DyadicRange(4)), 1, psi, 4);
    EXPECT_EQ(s.U, 0.0);
    EXPECT_EQ(s.W, 0.0);
    EXPECT_EQ(s.V, cd(0, 0));

    const auto all_blocked = eval_UVW(alpha, on(kind::Ones{}, 4), Support::of({2, 4, 6, 8}), 2, psi, 4);
    EXPECT_EQ(all_blocked.U, 0.0);
    EXPECT_EQ(all_blocked.W, 0.0);
    for (auto [q, c] : all_blocked.c)
        EXPECT_EQ(c, 0);
    EXPECT_EQ(cauchy_schwarz_gap(all_blocked, 1.0, 0.0), 0.0);
}

TEST(EvalUVW, MajorizationErrors)
{
    const auto alpha = on(kind::Ones{}, 4);
    const auto beta = on(kind::Ones{}, 2);
    EXPECT_THROW(eval_UVW(alpha, beta, Support::of({3}), 1, SmoothCutoff(0.5, 1.1, 2, 2.5), 4), PsiDoesNotMajorize);
    EXPECT_THROW(eval_UVW(alpha, beta, Support::of({3}), 1, SmoothCutoff::zero(), 4), PsiDoesNotMajorize);
    EXPECT_THROW(eval_UVW(alpha, beta, Support::of({3}), 1, SmoothCutoff::standard(), 8), PsiDoesNotMajorize);
    EXPECT_NO_THROW(eval_UVW(alpha, beta, Support::of({3}), 1, SmoothCutoff::standard(), 4));
}

TEST(EvalUVW, ToyGridMatchesNaive)
{
    const auto psi = SmoothCutoff::standard();
    const auto a = on(kind::Ones{}, 2), b = on(kind::Ones{}, 2);
    const Support moduli(DyadicRange(2));
    const auto s = eval_UVW(a, b, moduli, 1, psi, 2);
    const auto n = naive_uvw(a, b, moduli, 1, psi, 2);
    EXPECT_NEAR(s.U, static_cast<double>(n.U), 1e-12);
    EXPECT_NEAR(s.W, static_cast<double>(n.W), 1e-12);
    EXPECT_NEAR(std::abs(s.V - cd(static_cast<double>(n.V.real()), static_cast<double>(n.V.imag()))), 0.0, 1e-12);
    EXPECT_GE(cauchy_schwarz_gap(s, a.l2(), eval_Delta(a, b, moduli, 1)), -1e-12);
}

TEST(EvalUVW, PropertyRealSequences)
{
    gen::Rng g(32);
    const auto psi = SmoothCutoff::standard();
    const SequenceKind real_kinds[] = {kind::Ones{}, kind::Moebius{}, kind::TauK{2}, kind::TauK{3}};
    for (int i = 0; i < 40; ++i) {
        const i64 M = gen::integer(g, 2, 12), N = gen::integer(g, 1, 6), Q = gen::integer(g, 2, 8);
        const i64 a = gen::integer(g, -5, 5);
        const auto alpha = on(real_kinds[g() % 4], M), beta = on(real_kinds[g() % 4], N);
        const Support moduli{DyadicRange(Q)};
        const auto s = eval_UVW(alpha, beta, moduli, a, psi, static_cast<double>(M));
        const auto n = naive_uvw(alpha, beta, moduli, a, psi, static_cast<double>(M));
        const double scale = std::max(1.0, s.U + s.W);
        ASSERT_NEAR(s.U, static_cast<double>(n.U), 1e-10 * scale);
        ASSERT_NEAR(s.W, static_cast<double>(n.W), 1e-10 * scale);
        ASSERT_NEAR(s.V.real(), static_cast<double>(n.V.real()), 1e-10 * scale);
        for (std::size_t k = 0; k < s.c.size(); ++k)
            ASSERT_EQ(s.c[k].second, n.c[k]);
        ASSERT_NEAR(s.direct_quadratic, s.quadratic(), 1e-9 * scale);
        ASSERT_GE(cauchy_schwarz_gap(s, alpha.l2(), eval_Delta(alpha, beta, moduli, a)), -1e-9);
    }
}

TEST(EvalUVW, SingleSpike)
{
    const auto psi = SmoothCutoff::standard();
    const auto alpha = build_sequence(kind::Explicit{{{7, cd(1, 0)}}}, Support(DyadicRange(4)));
    const auto beta = on(kind::TauK{2}, 4);
    const Support moduli(DyadicRange(5));
    const auto s = eval_UVW(alpha, beta, moduli, 1, psi, 4);
    const double delta = eval_Delta(alpha, beta, moduli, 1);
    // for a spike at m0 the sum of c_q E(q) is X - Y at m0, and the quadratic contains |X - Y|^2 there
    const double gap = cauchy_schwarz_gap(s, alpha.l2(), delta);
    EXPECT_GE(gap, -1e-12);
    EXPECT_LE(delta * delta, s.quadratic() + 1e-9);
}

TEST(CauchySchwarzGap, ZeroAndNegative)
{
    DispersionSplit z;
    EXPECT_EQ(cauchy_schwarz_gap(z, 1.0, 0.0), 0.0);
    DispersionSplit bad;
    bad.U = 1;
    bad.W = 1;
    bad.V = cd(2, 0);
    EXPECT_THROW(cauchy_schwarz_gap(bad, 1.0, 0.0), NegativeQuadratic);
}

TEST(Fourier, CompletionExamples)
{
    const auto psi = SmoothCutoff::standard();
    const auto f1 = fourier_complete_ap(psi, 1000, 1, 0, 64);
    EXPECT_LE(f1.residual, 1e-6 / 1000);
    const auto z = fourier_complete_ap(SmoothCutoff::zero(), 1000, 3, 1, 64);
    EXPECT_EQ(z.lhs, 0.0);
    EXPECT_EQ(z.rhs, 0.0);
    const auto f3 = fourier_complete_ap(psi, 1000, 3, 1, 64);
    long double direct = 0;
    for (i64 m = 501; m < 2500; ++m)
        if (m % 3 == 1)
            direct += psi.value(m / 1000.0L);
    EXPECT_NEAR(f3.lhs, static_cast<double>(direct), 1e-9);
    EXPECT_LE(f3.residual * 1000, 1e-6);
    EXPECT_THROW(fourier_complete_ap(psi, 1000, 0, 1, 64), std::invalid_argument);
    EXPECT_THROW(fourier_complete_ap(psi, -1, 3, 1, 64), std::invalid_argument);
}

TEST(Fourier, CoprimeExamples)
{
    const auto psi = SmoothCutoff::standard();
    const auto c1 = fourier_coprime(psi, 500, 1);
    EXPECT_NEAR(c1.main, 750.0, 1e-9);
    EXPECT_NEAR(c1.lhs, c1.main, 1e-6);

    const auto big = fourier_coprime(psi, 500, 1259); // prime above the support
    long double all = 0;
    for (i64 m = 251; m < 1250; ++m)
        all += psi.value(m / 500.0L);
    EXPECT_NEAR(big.lhs, static_cast<double>(all), 1e-9);

    const auto c6 = fourier_coprime(psi, 500, 6);
    EXPECT_NEAR(c6.error_bound, 4 * std::pow(std::log(1000.0), 2), 1e-9);
    EXPECT_NEAR(c6.main, 250.0, 1e-9);
    EXPECT_TRUE(std::isfinite(c6.constant));
    EXPECT_LE(c6.constant, 1.0);
}

TEST(Dispersion, HAndProxy)
{
    EXPECT_EQ(compute_H(1, 1, 1), 4.0);
    EXPECT_EQ(compute_H(2, 1, 1), 64.0);
    EXPECT_NEAR(compute_H(1, 10, 100), 4.0, 1e-12);
    EXPECT_THROW(compute_H(0, 1, 1), std::invalid_argument);
    EXPECT_NEAR(estar_sw_proxy(std::exp(1.0), 3, 2), std::exp(2.0) * 3, 1e-12);
    EXPECT_THROW(estar_sw_proxy(1, 3, 2), std::invalid_argument);
}
