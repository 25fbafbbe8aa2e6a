#pragma once

// Exact evaluators for the trilinear Kloosterman-fraction form with a fixed
// denominator factor R,
//
//   B(M,N,A;R) = sum_{a,m,n, (m,nR)=1} alpha_m beta_n nu_a e(theta a inv(m) / (nR)),
//
// its mean square over m,
//
//   C_{1;R} = sum_{m, (m,R)=1} | sum_{a,n, (m,n)=1} beta_n nu_a e(theta a inv(m) / (nR)) |^2,
//
// and the squarefree-denominator mean square C_b with a complementary divisor b.
//
// Kernels are OpenMP-parallel over one outer index; every outer index writes
// its own partial and partials are reduced in index order, so the value is
// identical for every thread count. klab/reference.hpp has the serial
// versions these are tested and benchmarked against.

#include "klab/arith.hpp"
#include "klab/sequences.hpp"

#include <chrono>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace klab {

struct TrilinearSpec {
    CoefficientSequence alpha; // on the M range
    CoefficientSequence beta;  // on the N range
    CoefficientSequence nu;    // on the A range
    i64 theta = 1;
    u64 R = 1;

    /// Throws std::invalid_argument for theta == 0 or R == 0.
    void validate() const;
};

struct FormResult {
    std::complex<double> value;
    // summands with (m, nR) = 1 and a nonzero coefficient product
    std::uint64_t terms = 0;
    std::chrono::nanoseconds elapsed{0};
};

FormResult eval_trilinear_B(const TrilinearSpec& spec);

double eval_C1R_direct(const TrilinearSpec& spec);

/// n = core * squarefull * r with core squarefree and coprime to squarefull * R,
/// r = gcd(squarefree part of n, R). Unique for every n >= 1.
struct ComplementarySplit {
    u64 core = 1;
    u64 squarefull = 1;
    u64 r = 1;

    bool operator==(const ComplementarySplit&) const = default;
};

ComplementarySplit complementary_split(u64 n, u64 R);

/// One (b, r) class of the decomposition with its mean square
/// sum_m |z_{b,r}(m)|^2.
struct DecompositionPiece {
    u64 b = 1;
    u64 r = 1;
    std::size_t count = 0; // original indices n in this class
    double mean_square = 0;
};

struct DecomposedC1R {
    double value = 0;
    std::vector<DecompositionPiece> pieces; // sorted by (b, r)
    // indices whose squarefull part shares a prime with R
    std::size_t r_sharing_squarefull = 0;
};

/// C_{1;R} computed by regrouping the n-sum over (b, r, core). Audits that the
/// split reassembles every support index exactly once (DecompositionMismatch).
DecomposedC1R decompose_C1R(const TrilinearSpec& spec);

inline double eval_C1R_decomposed(const TrilinearSpec& spec) { return decompose_C1R(spec).value; }

/// sum_m | sum_{a, n squarefree, (mb,n)=1} beta_n nu_a e(theta a inv(m) / (nb)) |^2.
/// m with gcd(m, b) > 1 contribute nothing. spec.R is ignored.
double eval_Cb(const TrilinearSpec& spec, u64 b);

namespace detail {

/// sum_a nu_a e(a * step / d) with all arithmetic on numerators exact.
std::complex<double> phase_sum(std::span<const i64> a_idx, std::span<const cd> a_val, u64 step, u64 d);

} // namespace detail

} // namespace klab
