#pragma once

// Exact modular and multiplicative arithmetic. Moduli up to 2^63 are handled
// with 128-bit intermediates; factorization is trial division (desk scale).

#include <complex>
#include <optional>
#include <cstdint>
#include <span>
#include <vector>

namespace klab {

using i64 = std::int64_t;
using u64 = std::uint64_t;
__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

struct ResidueClass {
    u64 value = 0;
    u64 modulus = 1;

    bool operator==(const ResidueClass&) const = default;
};

// n = squarefree_part * squarefull_part with coprime parts; 1 counts as squarefull.
struct SqfSplit {
    u64 squarefree_part = 1;
    u64 squarefull_part = 1;

    bool operator==(const SqfSplit&) const = default;
};

struct PrimePower {
    u64 prime;
    unsigned exponent;

    bool operator==(const PrimePower&) const = default;
};

/// a mod m in [0, m).
u64 reduce(i64 a, u64 m);
u64 mulmod(u64 a, u64 b, u64 m);
u64 checked_mul(u64 a, u64 b);

std::vector<PrimePower> factorize(u64 n);

/// Inverse of a modulo m. Throws NonInvertible when gcd(a, m) > 1.
/// Modulus 1 is allowed and yields the zero class.
ResidueClass mod_inverse(i64 a, u64 m);
/// Same, with nullopt instead of an exception.
std::optional<u64> try_mod_inverse(i64 a, u64 m);

/// Elementwise mod_inverse with a single extended-gcd call (prefix products).
/// On failure the thrown NonInvertible carries the first offending index.
std::vector<ResidueClass> batch_mod_inverse(std::span<const i64> values, u64 m);

SqfSplit squarefree_squarefull_split(u64 n);
bool is_squarefree(u64 n);
bool is_squarefull(u64 n);

/// Number of ordered k-tuples of positive integers with product n.
u64 tau_k(u64 n, unsigned k);
inline u64 tau(u64 n) { return tau_k(n, 2); }
int mobius(u64 n);
u64 euler_phi(u64 n);

/// e(x/d) = exp(2 pi i x/d) for 0 <= x < d; the numerator is folded to
/// (-d/2, d/2] in exact integers before the transcendental call.
std::complex<double> unit_phase(u64 x, u64 d);

/// e(theta * a * inv(m) / (n R)). Throws NonInvertible if gcd(m, nR) > 1.
std::complex<double> kloosterman_phase(i64 theta, i64 a, i64 m, u64 n, u64 R);

/// Smallest-prime-factor table for fast repeated factorization up to limit.
class FactorSieve
{
public:
    static constexpr u64 max_limit = 10'000'000;

    explicit FactorSieve(u64 limit);

    u64 limit() const noexcept { return static_cast<u64>(spf_.size()) - 1; }
    std::vector<PrimePower> factorize(u64 n) const;
    SqfSplit split(u64 n) const;
    int mobius(u64 n) const;

private:
    std::vector<std::uint32_t> spf_;
};

} // namespace klab
