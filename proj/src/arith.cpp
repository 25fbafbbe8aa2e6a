#include "klab/arith.hpp"

#include "klab/errors.hpp"

#include <fmt/format.h>

#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace klab {

u64 reduce(i64 a, u64 m)
{
    if (m == 0)
        throw std::invalid_argument("reduce: modulus must be positive");
    i128 r = static_cast<i128>(a) % static_cast<i128>(m);
    if (r < 0)
        r += m;
    return static_cast<u64>(r);
}

u64 mulmod(u64 a, u64 b, u64 m)
{
    return static_cast<u64>((static_cast<u128>(a) * b) % m);
}

u64 checked_mul(u64 a, u64 b)
{
    u128 p = static_cast<u128>(a) * b;
    if (p > std::numeric_limits<u64>::max())
        throw std::overflow_error(fmt::format("product {} * {} overflows 64 bits", a, b));
    return static_cast<u64>(p);
}

std::vector<PrimePower> factorize(u64 n)
{
    if (n == 0)
        throw std::invalid_argument("factorize: n must be positive");
    std::vector<PrimePower> out;
    auto strip = [&](u64 p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e)
            out.push_back({p, e});
    };
    strip(2);
    strip(3);
    for (u64 p = 5; p <= n / p; p += 6) {
        strip(p);
        strip(p + 2);
    }
    if (n > 1)
        out.push_back({n, 1});
    return out;
}

namespace {

// Inverse of r in [0, m), m >= 2; nullopt when gcd(r, m) > 1.
std::optional<u64> inverse_reduced(u64 r, u64 m)
{
    i128 old_r = r, cur_r = m;
    i128 old_s = 1, cur_s = 0;
    while (cur_r != 0) {
        i128 q = old_r / cur_r;
        i128 t = old_r - q * cur_r;
        old_r = cur_r;
        cur_r = t;
        t = old_s - q * cur_s;
        old_s = cur_s;
        cur_s = t;
    }
    if (old_r != 1)
        return std::nullopt;
    i128 v = old_s % static_cast<i128>(m);
    if (v < 0)
        v += m;
    return static_cast<u64>(v);
}

} // namespace

ResidueClass mod_inverse(i64 a, u64 m)
{
    if (m == 0)
        throw std::invalid_argument("mod_inverse: modulus must be positive");
    if (m == 1)
        return {0, 1};
    auto v = inverse_reduced(reduce(a, m), m);
    if (!v)
        throw NonInvertible(fmt::format("{} is not invertible modulo {}", a, m));
    return {*v, m};
}

std::optional<u64> try_mod_inverse(i64 a, u64 m)
{
    if (m == 0)
        throw std::invalid_argument("try_mod_inverse: modulus must be positive");
    if (m == 1)
        return 0;
    return inverse_reduced(reduce(a, m), m);
}

std::vector<ResidueClass> batch_mod_inverse(std::span<const i64> values, u64 m)
{
    if (m == 0)
        throw std::invalid_argument("batch_mod_inverse: modulus must be positive");
    const std::size_t k = values.size();
    std::vector<ResidueClass> out(k, ResidueClass{0, m});
    if (k == 0 || m == 1)
        return out;

    // prefix[i] = v_0 * ... * v_{i-1}
    std::vector<u64> reduced(k), prefix(k + 1);
    prefix[0] = 1;
    for (std::size_t i = 0; i < k; ++i) {
        reduced[i] = reduce(values[i], m);
        prefix[i + 1] = mulmod(prefix[i], reduced[i], m);
    }
    if (std::gcd(prefix[k], m) != 1) {
        for (std::size_t i = 0; i < k; ++i)
            if (std::gcd(reduced[i], m) != 1)
                throw NonInvertible(
                    fmt::format("value {} at index {} is not invertible modulo {}", values[i], i, m),
                    i);
    }

    u64 inv = *inverse_reduced(prefix[k], m);
    for (std::size_t i = k; i-- > 0;) {
        out[i].value = mulmod(inv, prefix[i], m);
        inv = mulmod(inv, reduced[i], m);
    }
    return out;
}

SqfSplit squarefree_squarefull_split(u64 n)
{
    SqfSplit s;
    for (const auto& [p, e] : factorize(n)) {
        u64 pe = 1;
        for (unsigned i = 0; i < e; ++i)
            pe *= p;
        if (e == 1)
            s.squarefree_part *= pe;
        else
            s.squarefull_part *= pe;
    }
    return s;
}

bool is_squarefree(u64 n)
{
    for (const auto& pp : factorize(n))
        if (pp.exponent > 1)
            return false;
    return true;
}

bool is_squarefull(u64 n)
{
    for (const auto& pp : factorize(n))
        if (pp.exponent < 2)
            return false;
    return true;
}

u64 tau_k(u64 n, unsigned k)
{
    if (k == 0)
        throw std::invalid_argument("tau_k: k must be positive");
    u128 result = 1;
    for (const auto& [p, e] : factorize(n)) {
        // C(e + k - 1, e)
        u128 c = 1;
        for (unsigned i = 1; i <= e; ++i) {
            c = c * (k - 1 + i) / i;
            if (c > std::numeric_limits<u64>::max())
                throw std::overflow_error("tau_k: result overflows 64 bits");
        }
        result *= c;
        if (result > std::numeric_limits<u64>::max())
            throw std::overflow_error("tau_k: result overflows 64 bits");
    }
    return static_cast<u64>(result);
}

int mobius(u64 n)
{
    int mu = 1;
    for (const auto& pp : factorize(n)) {
        if (pp.exponent > 1)
            return 0;
        mu = -mu;
    }
    return mu;
}

u64 euler_phi(u64 n)
{
    u64 phi = n;
    for (const auto& pp : factorize(n))
        phi = phi / pp.prime * (pp.prime - 1);
    return phi;
}

std::complex<double> unit_phase(u64 x, u64 d)
{
    if (x == 0)
        return {1.0, 0.0};
    double t;
    if (x > d / 2)
        t = -static_cast<double>(d - x) / static_cast<double>(d);
    else
        t = static_cast<double>(x) / static_cast<double>(d);
    const double angle = 2.0 * std::numbers::pi * t;
    return {std::cos(angle), std::sin(angle)};
}

std::complex<double> kloosterman_phase(i64 theta, i64 a, i64 m, u64 n, u64 R)
{
    if (n == 0 || R == 0)
        throw std::invalid_argument("kloosterman_phase: n and R must be positive");
    const u64 d = checked_mul(n, R);
    const u64 inv = mod_inverse(m, d).value;
    const u64 x = mulmod(mulmod(reduce(theta, d), reduce(a, d), d), inv, d);
    return unit_phase(x, d);
}

FactorSieve::FactorSieve(u64 limit)
{
    if (limit > max_limit)
        throw std::invalid_argument(fmt::format("FactorSieve: limit {} exceeds {}", limit, max_limit));
    spf_.assign(limit + 1, 0);
    for (u64 i = 2; i <= limit; ++i) {
        if (spf_[i] != 0)
            continue;
        for (u64 j = i; j <= limit; j += i)
            if (spf_[j] == 0)
                spf_[j] = static_cast<std::uint32_t>(i);
    }
}

std::vector<PrimePower> FactorSieve::factorize(u64 n) const
{
    if (n == 0)
        throw std::invalid_argument("factorize: n must be positive");
    if (n > limit())
        return klab::factorize(n);
    std::vector<PrimePower> out;
    while (n > 1) {
        const u64 p = spf_[n];
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    return out;
}

SqfSplit FactorSieve::split(u64 n) const
{
    SqfSplit s;
    for (const auto& [p, e] : factorize(n)) {
        u64 pe = 1;
        for (unsigned i = 0; i < e; ++i)
            pe *= p;
        (e == 1 ? s.squarefree_part : s.squarefull_part) *= pe;
    }
    return s;
}

int FactorSieve::mobius(u64 n) const
{
    int mu = 1;
    for (const auto& pp : factorize(n)) {
        if (pp.exponent > 1)
            return 0;
        mu = -mu;
    }
    return mu;
}

} // namespace klab
