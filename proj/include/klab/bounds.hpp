#pragma once

// Closed-form right-hand sides of the trilinear-form bounds, evaluated term by
// term. Each evaluator returns the common prefactor, the raw bracket terms and
// their scaled values; the total is the plain sum of scaled terms.

#include "klab/arith.hpp"
#include "klab/forms.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace klab {

struct RhsTerm {
    std::string name;
    double raw = 0;   // bracket term alone
    double value = 0; // prefactor * raw
};

struct Rhs {
    double prefactor = 0;
    std::vector<RhsTerm> terms;
    double total = 0;
    // hypothesis violations; the numbers are still computed
    std::vector<std::string> flags;

    const RhsTerm& term(std::string_view name) const;
};

struct BoundReport {
    double lhs = 0;
    Rhs rhs;
    double ratio = 0; // lhs / rhs.total, 0 when the total is 0
    std::vector<std::pair<std::string, double>> point;
};

BoundReport make_report(double lhs, Rhs rhs, std::vector<std::pair<std::string, double>> point = {});

struct Norms {
    double alpha = 1;
    double beta = 1;
    double nu = 1;
};

/// ||a|| ||b|| ||nu|| (1 + |theta| A/(MN))^{1/2}
///   * ((AMN)^{7/20+eps} (M+N)^{1/4} + (AMN)^{3/8+eps} (AN+AM)^{1/8}).
Rhs rhs_theorem_BC(double M, double N, double A, i64 theta, Norms norms, double epsilon);

/// Which A-exponent the third bracket term of the fixed-factor bound carries:
/// 1/20 as the theorem is stated, 3/10 as its proof concludes.
enum class ExponentVariant { theorem_statement, proof_final };

std::string to_string(ExponentVariant v);
ExponentVariant parse_exponent_variant(std::string_view s);

struct BcrOptions {
    ExponentVariant variant = ExponentVariant::theorem_statement;
    // R << M^power is checked with this power
    double hypothesis_power = 10;
};

/// M^eps ||a|| ||nu|| ||b|| (AMN)^{1/2} R^{1/4} (1 + |theta| A/(MN))^{1/4}
///   * (N^{-1/8} + R^{1/8} N^{1/8} M^{-1/4} + M^{1/10} R^{-3/20} A^{-x} N^{-3/20}
///      + N^{3/20} A^{-3/20} M^{-1/5} + N^{3/8} M^{-1/2}),   x per the variant.
/// Flags "M>N^2" and "R>M^power" when the hypotheses fail.
Rhs rhs_theorem_BCR(double M, double N, double A, double R, i64 theta, Norms norms, double epsilon,
                    BcrOptions options = {});

/// Six-term bound for C_b:
/// ||b||^2 ||nu||^2 M^eps (1 + |theta| A/(bMN))^{1/2} (AM(bN)^{1/2} + b^{3/4} A M^{1/2} N^{5/4}
///   + A M^{6/5} N^{1/10} b^{-2/5} + b^{1/5} A^{2/5} M^{6/5} N^{7/10}
///   + b^{1/2} A^{7/10} M^{3/5} N^{13/10} + b^{1/2} A N^{7/4}).
Rhs rhs_Cb_bound(double M, double N, double A, double b, i64 theta, double beta_norm, double nu_norm,
                 double epsilon);

/// Five-term bound for C_{1;R} after summing C_b over b <= N^{1/2}:
/// M^eps ||nu||^2 ||b||^2 (1 + |theta| A/(MN))^{1/2} (A M R^{1/2} N^{3/4} + R^{3/4} A M^{1/2} N^{5/4}
///   + R^{1/5} A^{2/5} M^{6/5} N^{7/10} + R^{1/2} A^{7/10} M^{3/5} N^{13/10} + R^{1/2} A N^{7/4}).
Rhs rhs_C1R_bound(double M, double N, double A, double R, i64 theta, double beta_norm, double nu_norm,
                  double epsilon);

/// Contribution of the squarefull classes b > B under the trivial bound:
/// ||b||^2 ||nu||^2 A N M^{1+eps} / B^{1/2}.
double trivial_tail_bound(double M, double N, double A, double B, double beta_norm, double nu_norm,
                          double epsilon);

/// The cutoff B = N^{1/2} for the squarefull classes.
inline double squarefull_cutoff(double N) { return std::sqrt(N); }

/// Cauchy-Schwarz majorant of C_{1;R} over the (b, r) classes:
/// tau(R) * (sum_b b^{-1/2}) * sum_{b,r} b^{1/2} mean_square(b, r),
/// with b ranging over the squarefull parts present. Always >= C_{1;R}.
double decomposition_majorant(std::span<const DecompositionPiece> pieces, u64 R);

struct ImpliedConstant {
    double value = 0;
    std::size_t argmax = 0;
    std::vector<std::pair<std::string, double>> point;
};

/// Largest lhs/rhs ratio. Throws EmptyList, or ZeroRHS naming the first report with rhs.total == 0.
ImpliedConstant implied_constant_estimate(std::span<const BoundReport> reports);

} // namespace klab
