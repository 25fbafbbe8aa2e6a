#include "generators.hpp"
#include "oracle.hpp"

#include "klab/arith.hpp"
#include "klab/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace klab;

TEST(ModInverse, Examples)
{
    EXPECT_EQ(mod_inverse(1, 7), (ResidueClass{1, 7}));
    EXPECT_EQ(mod_inverse(3, 7), (ResidueClass{5, 7}));
    EXPECT_THROW(mod_inverse(2, 4), NonInvertible);
}

TEST(ModInverse, NegativeAndModulusOne)
{
    EXPECT_EQ(mod_inverse(-3, 7).value, 2u); // -3 = 4, 4*2 = 8
    EXPECT_EQ(mod_inverse(12345, 1).value, 0u);
    EXPECT_EQ(try_mod_inverse(4, 6), std::nullopt);
    EXPECT_EQ(try_mod_inverse(5, 6), std::optional<u64>(5));
}

TEST(ModInverse, LargeModulus)
{
    const u64 p = 9223372036854775783ULL; // largest prime below 2^63
    const u64 inv = mod_inverse(123456789, p).value;
    EXPECT_EQ(mulmod(123456789, inv, p), 1u);
}

TEST(ModInverse, MatchesSearchOracle)
{
    for (u64 m = 1; m <= 60; ++m)
        for (i64 a = -70; a <= 70; ++a) {
            const auto want = oracle::inverse(a, m);
            const auto got = try_mod_inverse(a, m);
            ASSERT_EQ(got, want) << a << " mod " << m;
        }
}

TEST(ModInverse, PropertyRandomPairs)
{
    gen::Rng g(11);
    for (int i = 0; i < 10000; ++i) {
        const auto [a, m] = gen::unit_residue(g, 1u << 20, 1 << 30);
        const u64 inv = mod_inverse(a, m).value;
        ASSERT_LT(inv, m);
        ASSERT_EQ(mulmod(reduce(a, m), inv, m), 1 % m) << a << " mod " << m;
    }
}

TEST(ModInverse, Reciprocity)
{
    for (u64 m = 1; m <= 200; ++m)
        for (u64 n = 1; n <= 200; ++n) {
            if (std::gcd(m, n) != 1)
                continue;
            const u64 lhs = m * mod_inverse(static_cast<i64>(m), n).value + n * mod_inverse(static_cast<i64>(n), m).value;
            ASSERT_EQ(lhs % (m * n), 1 % (m * n)) << m << "," << n;
        }
}

TEST(BatchModInverse, Examples)
{
    const std::vector<i64> one{1};
    EXPECT_EQ(batch_mod_inverse(one, 5), (std::vector<ResidueClass>{{1, 5}}));
    const std::vector<i64> three{2, 3, 4};
    EXPECT_EQ(batch_mod_inverse(three, 5), (std::vector<ResidueClass>{{3, 5}, {2, 5}, {4, 5}}));
}

TEST(BatchModInverse, ReportsFirstOffendingIndex)
{
    const std::vector<i64> v{2, 5};
    try {
        batch_mod_inverse(v, 10);
        FAIL() << "expected NonInvertible";
    } catch (const NonInvertible& e) {
        ASSERT_TRUE(e.index().has_value());
        EXPECT_EQ(*e.index(), 0u);
    }
    const std::vector<i64> w{3, 7, 9, 4, 6};
    try {
        batch_mod_inverse(w, 10);
        FAIL() << "expected NonInvertible";
    } catch (const NonInvertible& e) {
        EXPECT_EQ(e.index(), std::optional<std::size_t>(3));
    }
}

TEST(BatchModInverse, PropertyMatchesElementwise)
{
    gen::Rng g(5);
    for (int trial = 0; trial < 200; ++trial) {
        const u64 m = static_cast<u64>(gen::integer(g, 1, 5000));
        std::vector<i64> vals;
        while (vals.size() < 50) {
            const i64 v = gen::integer(g, -100000, 100000);
            if (std::gcd(reduce(v, m), m) == 1)
                vals.push_back(v);
        }
        const auto batch = batch_mod_inverse(vals, m);
        for (std::size_t i = 0; i < vals.size(); ++i)
            ASSERT_EQ(batch[i], mod_inverse(vals[i], m));
    }
}

TEST(Split, Examples)
{
    EXPECT_EQ(squarefree_squarefull_split(1), (SqfSplit{1, 1}));
    EXPECT_EQ(squarefree_squarefull_split(12), (SqfSplit{3, 4}));
    EXPECT_EQ(squarefree_squarefull_split(72), (SqfSplit{1, 72}));
    EXPECT_THROW(squarefree_squarefull_split(0), std::invalid_argument);
}

TEST(Split, PropertyAgainstFactorization)
{
    for (u64 n = 1; n <= 20000; ++n) {
        u64 sf = 1, full = 1;
        for (auto [p, e] : oracle::factor(n))
            for (unsigned i = 0; i < e; ++i)
                (e == 1 ? sf : full) *= p;
        ASSERT_EQ(squarefree_squarefull_split(n), (SqfSplit{sf, full})) << n;
        ASSERT_EQ(is_squarefree(n), oracle::squarefree(n));
    }
}

TEST(Multiplicative, Examples)
{
    EXPECT_EQ(tau_k(1, 4), 1u);
    EXPECT_EQ(tau_k(6, 2), 4u);
    EXPECT_EQ(tau_k(4, 3), 6u);
    EXPECT_EQ(tau(12), 6u);
    EXPECT_EQ(mobius(1), 1);
    EXPECT_EQ(mobius(30), -1);
    EXPECT_EQ(mobius(12), 0);
    EXPECT_EQ(euler_phi(1), 1u);
    EXPECT_EQ(euler_phi(36), 12u);
    EXPECT_TRUE(is_squarefull(1));
    EXPECT_TRUE(is_squarefull(72));
    EXPECT_FALSE(is_squarefull(12));
}

TEST(Multiplicative, AgainstOracles)
{
    for (u64 n = 1; n <= 400; ++n) {
        ASSERT_EQ(mobius(n), oracle::mobius(n)) << n;
        ASSERT_EQ(euler_phi(n), oracle::phi(n)) << n;
        for (unsigned k = 1; k <= 4; ++k)
            ASSERT_EQ(tau_k(n, k), oracle::tau_k(n, k)) << n << "," << k;
    }
}

TEST(Multiplicative, FactorizeReassembles)
{
    gen::Rng g(3);
    for (int i = 0; i < 2000; ++i) {
        const u64 n = static_cast<u64>(gen::integer(g, 1, 1'000'000'000));
        u64 prod = 1;
        u64 last = 1;
        for (const auto& pp : factorize(n)) {
            ASSERT_GT(pp.prime, last);
            last = pp.prime;
            for (unsigned e = 0; e < pp.exponent; ++e)
                prod *= pp.prime;
        }
        ASSERT_EQ(prod, n);
    }
}

TEST(FactorSieve, AgreesWithTrialDivision)
{
    const FactorSieve sieve(50000);
    EXPECT_EQ(sieve.limit(), 50000u);
    for (u64 n = 1; n <= 50000; ++n) {
        ASSERT_EQ(sieve.factorize(n), factorize(n)) << n;
        ASSERT_EQ(sieve.split(n), squarefree_squarefull_split(n)) << n;
        ASSERT_EQ(sieve.mobius(n), mobius(n)) << n;
    }
    EXPECT_THROW(FactorSieve(FactorSieve::max_limit + 1), std::invalid_argument);
}

TEST(Checked, MulmodAndOverflow)
{
    const u64 big = (1ULL << 62) + 1;
    EXPECT_EQ(mulmod(big, big, 1000000007ULL), static_cast<u64>((static_cast<u128>(big) * big) % 1000000007ULL));
    EXPECT_EQ(checked_mul(1ULL << 31, 1ULL << 31), 1ULL << 62);
    EXPECT_THROW(checked_mul(1ULL << 32, 1ULL << 32), std::overflow_error);
    EXPECT_EQ(reduce(-1, 5), 4u);
    EXPECT_EQ(reduce(-10, 5), 0u);
}

TEST(Phase, KloostermanExamples)
{
    const auto z0 = kloosterman_phase(1, 0, 5, 7, 3);
    EXPECT_NEAR(z0.real(), 1.0, 1e-15);
    EXPECT_NEAR(z0.imag(), 0.0, 1e-15);

    const auto z1 = kloosterman_phase(1, 2, 2, 3, 1);
    EXPECT_NEAR(z1.real(), -0.5, 1e-12);
    EXPECT_NEAR(z1.imag(), std::sqrt(3.0) / 2, 1e-12);

    const auto z2 = kloosterman_phase(1, 1, 3, 4, 2);
    EXPECT_NEAR(z2.real(), std::cos(2 * std::numbers::pi * 3 / 8), 1e-12);
    EXPECT_NEAR(z2.imag(), std::sin(2 * std::numbers::pi * 3 / 8), 1e-12);

    EXPECT_THROW(kloosterman_phase(1, 1, 2, 3, 2), NonInvertible);
}

TEST(Phase, UnitModulusAndOracle)
{
    gen::Rng g(17);
    for (int i = 0; i < 5000; ++i) {
        const i64 th = gen::integer(g, 1, 9) * (g() % 2 ? 1 : -1);
        const i64 a = gen::integer(g, -1000, 1000);
        const u64 n = static_cast<u64>(gen::integer(g, 1, 400));
        const u64 R = static_cast<u64>(gen::integer(g, 1, 30));
        const i64 m = gen::integer(g, 1, 100000);
        const u64 d = n * R;
        const auto inv = oracle::inverse(m, d);
        if (!inv) {
            ASSERT_THROW(kloosterman_phase(th, a, m, n, R), NonInvertible);
            continue;
        }
        const auto z = kloosterman_phase(th, a, m, n, R);
        ASSERT_NEAR(std::abs(z), 1.0, 1e-12);
        const long double x = static_cast<long double>(oracle::mod(th * a % static_cast<i64>(d) * static_cast<i64>(*inv), d)) / d;
        const auto want = oracle::e(x);
        ASSERT_NEAR(z.real(), static_cast<double>(want.real()), 1e-12);
        ASSERT_NEAR(z.imag(), static_cast<double>(want.imag()), 1e-12);
    }
}

TEST(Phase, UnitPhaseFolding)
{
    EXPECT_NEAR(unit_phase(0, 1).real(), 1.0, 1e-15);
    EXPECT_NEAR(unit_phase(1, 2).real(), -1.0, 1e-15);
    EXPECT_NEAR(unit_phase(1, 4).imag(), 1.0, 1e-15);
    EXPECT_NEAR(unit_phase(3, 4).imag(), -1.0, 1e-15);
    const u64 d = 1'000'000'007ULL;
    const auto z = unit_phase(d - 1, d);
    EXPECT_NEAR(z.imag(), -std::sin(2 * std::numbers::pi / static_cast<double>(d)), 1e-18);
}
