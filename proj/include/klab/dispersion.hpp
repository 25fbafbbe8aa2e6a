#pragma once

// Arithmetic-progression error terms of a convolution alpha * beta, the
// dispersion split of sum_q |E(q)| into W - 2 Re V + U, and the smooth-cutoff
// Fourier completion used to open those sums.

#include "klab/arith.hpp"
#include "klab/bounds.hpp"
#include "klab/sequences.hpp"

#include <complex>
#include <memory>
#include <utility>
#include <vector>

namespace klab {

/// psi = 1 on [plateau_lo, plateau_hi], 0 outside (support_lo, support_hi),
/// C-infinity ramps s(t) = f(t) / (f(t) + f(1-t)), f(t) = exp(-1/t), in between.
///
/// fourier(xi) = integral psi(x) e(-x xi) dx: the plateau part is closed form,
/// each ramp is integrated by Gauss-Kronrod on panels of half an oscillation.
/// Frequencies with |xi| * (narrowest ramp) above negligible_oscillations are
/// returned as 0; the transform there is below 1e-40 for the default ramps.
/// Transforms are cached; copies of a cutoff share the cache, which is
/// safe for concurrent use.
class SmoothCutoff
{
public:
    static constexpr long double negligible_oscillations = 1000.0L;

    SmoothCutoff(double support_lo, double plateau_lo, double plateau_hi, double support_hi,
                 double quadrature_tolerance = 1e-10);

    /// Support [1/2, 5/2], plateau [1, 2].
    static SmoothCutoff standard();
    /// The identically zero cutoff.
    static SmoothCutoff zero();

    bool is_zero() const noexcept { return zero_; }
    double support_lo() const noexcept { return support_lo_; }
    double plateau_lo() const noexcept { return plateau_lo_; }
    double plateau_hi() const noexcept { return plateau_hi_; }
    double support_hi() const noexcept { return support_hi_; }
    double quadrature_tolerance() const noexcept { return tolerance_; }

    /// plateau contains [1, 2], so psi(m/M) >= 1 on (M, 2M].
    bool majorizes_dyadic() const noexcept { return !zero_ && plateau_lo_ <= 1.0 && plateau_hi_ >= 2.0; }

    double operator()(double x) const { return static_cast<double>(value(x)); }
    long double value(long double x) const;

    /// Throws QuadratureFailure when the error estimate exceeds the tolerance.
    std::complex<long double> fourier(long double xi) const;

private:
    SmoothCutoff() = default;
    std::complex<long double> compute_fourier(long double xi) const;

    struct Cache;

    double support_lo_ = 0;
    double plateau_lo_ = 0;
    double plateau_hi_ = 0;
    double support_hi_ = 0;
    double tolerance_ = 1e-10;
    bool zero_ = true;
    std::shared_ptr<Cache> cache_;
};

/// sum_{mn = a (q)} alpha_m beta_n - (1/phi(q)) sum_{(mn,q)=1} alpha_m beta_n.
cd eval_E(const CoefficientSequence& alpha, const CoefficientSequence& beta, u64 q, i64 a);

/// sum over q in moduli with (q, a) = 1 of |E(q)|.
double eval_Delta(const CoefficientSequence& alpha, const CoefficientSequence& beta, const Support& moduli, i64 a);

struct DispersionSplit {
    double U = 0;
    double W = 0;
    cd V;
    std::vector<std::pair<u64, int>> c; // (q, c_q), c_q in {-1, 0, +1}
    // sum_m psi(m/M) |X_m - Y_m|^2 accumulated directly
    double direct_quadratic = 0;

    double quadratic() const noexcept { return W - 2.0 * V.real() + U; }
};

/// c_q = sign of Re E(q) (+1 at zero), 0 when gcd(a, q) > 1;
/// X_m = sum_{q, n: mn = a (q)} c_q beta_n, Y_m = sum_{q, n: (mn,q)=1} c_q beta_n / phi(q);
/// U = sum psi(m/M) |Y_m|^2, W = sum psi(m/M) |X_m|^2, V = sum psi(m/M) X_m conj(Y_m),
/// over every integer m where psi(m/M) > 0.
/// Throws PsiDoesNotMajorize unless the plateau covers [1, 2].
DispersionSplit eval_UVW(const CoefficientSequence& alpha, const CoefficientSequence& beta, const Support& moduli,
                         i64 a, const SmoothCutoff& psi, double M_scale);

/// ||alpha|| sqrt(max(0, W - 2 Re V + U)) - delta. Throws NegativeQuadratic when the
/// quadratic is below -1e-9 * max(1, W + U).
double cauchy_schwarz_gap(const DispersionSplit& split, double alpha_l2, double delta);

struct FourierCompletion {
    double lhs = 0;      // sum_{m = a (q)} psi(m/M)
    double rhs = 0;      // (M/q) sum_{|h| <= H} e(ah/q) psihat(hM/q)
    double residual = 0; // |lhs - rhs|, formed in extended precision
};

FourierCompletion fourier_complete_ap(const SmoothCutoff& psi, double M_scale, u64 q, i64 a, u64 H);

struct CoprimeCompletion {
    double lhs = 0;         // sum_{(m,q)=1} psi(m/M)
    double main = 0;        // (phi(q)/q) psihat(0) M
    double error_bound = 0; // tau(q) (log 2M)^2
    double constant = 0;    // |lhs - main| / error_bound
};

CoprimeCompletion fourier_coprime(const SmoothCutoff& psi, double M_scale, u64 q);

/// H = 4 L^4 Q^2 / M.
double compute_H(double L, double Q, double M);

/// N^2 Q (log N)^{-A}, the size E* has for a Siegel-Walfisz beta.
double estar_sw_proxy(double N, double Q, double A);

struct DispersionBoundInput {
    double M = 1, N = 1, Q = 1, D = 1;
    double alpha_l2 = 1;
    double Estar = 0;
    double kappa = 0;
    double C = 0;
    double epsilon = 0;
    double X = 1;
};

struct DispersionRhs {
    // terms are the summands under the square root; total = alpha_l2 * sqrt(sum)
    Rhs rhs;
    // the two replaced terms of the original estimate, scaled like rhs.terms[3..4]
    std::vector<RhsTerm> original_terms;
    // new / original for those two terms
    std::vector<double> savings;
};

/// ||alpha|| (M Q^{-1} E* + (log X)^kappa N^2 Q + (log X)^kappa N^2 D^{-1/2} M
///   + D^C X^eps (Q^{15/8} N^{11/4} + M^{3/20} Q^{33/20} N^{51/20}))^{1/2}.
/// Flags "M<=Q(MN)^eps", "M<=N", "N<=D^10" and "D>=N^10" when those size relations fail.
DispersionRhs rhs_dispersion_thm(const DispersionBoundInput& in);

} // namespace klab
