#pragma once

// Exact exponent-of-X arithmetic for the unbalanced-convolution ranges.
// With X ~ MN, Q = X^q, N = X^n, |a| = X^a, every condition is linear in the
// exponents and is decided with exact rationals. The epsilon of a condition
// such as N <= X^{7/90 - eps} is an explicit argument.

#include "klab/bounds.hpp"
#include "klab/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace klab {

enum class Corollary { fr_cor11, new_cor };
enum class RangeVariant { i, ii, iii };

std::string to_string(Corollary c);
std::string to_string(RangeVariant v);
Corollary parse_corollary(std::string_view s); // "fr" / "new" (or the enum names)

/// n <= intercept + slope * q
struct LinearCeiling {
    Rational intercept;
    Rational slope;

    Rational at(const Rational& q) const { return intercept + slope * q; }
    /// q where the ceiling reaches 0 (slope must be nonzero).
    Rational root() const { return -intercept / slope; }

    bool operator==(const LinearCeiling&) const = default;
};

/// Variant (i) line: 17/36 - (11/12) q for the original corollary, 17/28 - (33/28) q for the new one.
LinearCeiling variant_i_line(Corollary c);

/// Q cap of variants (ii)/(iii): 53/105 (original) or 45/89 (new).
Rational variant_q_cap(Corollary c);

/// Fixed N caps of variants (ii) and (iii): 7/90 and 101/630.
Rational variant_n_cap(RangeVariant v);

struct NCeiling {
    Rational ceiling;                   // before the -epsilon
    bool feasible = false;              // ceiling > 0 and q within any cap
    std::optional<bool> q_admissible;   // variants (ii)/(iii): q <= cap
    std::optional<Rational> q_cap;
};

/// Throws InvalidExponent unless 0 < q_exp < 1.
NCeiling admissible_N_exponent(Corollary c, RangeVariant v, const Rational& q_exp);

/// The q at which the variant (i) ceiling reaches zero (17/33 for both corollaries).
Rational extremal_q_exponent(Corollary c);

/// For a constraint M^{cm} Q^{cq} N^{cn} < X with M = X/N, the ceiling on n as a line in q.
/// Throws std::domain_error unless the N-exponent exceeds the M-exponent.
LinearCeiling ceiling_from_constraint(const Monomial& lhs);

/// Last two terms inside the dispersion bound: Q^{15/8} N^{11/4} and M^{3/20} Q^{33/20} N^{51/20}.
std::vector<Monomial> dispersion_error_terms();

enum class OriginalDisplay {
    comparison,   // M^{3/20} in the second term, as in the side-by-side comparison
    cited_bound,  // M^{3/10} in the second term, as in the cited estimate being replaced
};

/// The same two terms in the original estimate: Q^{15/8} N^{23/8} and M^{3/20 or 3/10} Q^{33/20} N^{59/20}.
std::vector<Monomial> original_dispersion_error_terms(OriginalDisplay d = OriginalDisplay::comparison);

/// ||alpha|| * term^{1/2} with ||alpha|| ~ M^{1/2}: M^{1/2} Q^{15/16} N^{11/8} and M^{23/40} Q^{33/40} N^{51/40}.
std::vector<Monomial> convolution_constraints();

/// Raw C_{1;R} bound terms (after the b <= N^{1/2} cutoff), their common factor A M N R^{1/2},
/// and the bracket of the fixed-factor trilinear bound for either A-exponent variant.
std::vector<Monomial> c1r_bound_terms();
Monomial c1r_common_factor();
std::vector<Monomial> bcr_bracket_terms(ExponentVariant v);

enum class FouvryResult {
    corollaire_1, // Q <= min(sqrt(NX), X^{4/7} N^{-6/7})
    theoreme_1,   // Q <= min(sqrt(NX), X^{5/8} N^{-3/4})
};

/// q ceiling of a Fouvry range at a given n.
Rational fouvry_q_ceiling(FouvryResult r, const Rational& n_exp);
/// Largest n for which the Fouvry range still reaches q (the power-law branch).
Rational fouvry_n_ceiling(FouvryResult r, const Rational& q_exp);

struct Condition {
    std::string name;
    bool holds = false;
    Rational slack; // rhs - lhs of the defining inequality
};

struct CorollaryCheck {
    std::vector<RangeVariant> satisfied;
    std::vector<Condition> conditions;
    bool fouvry_corollaire_1 = false;
    bool fouvry_theoreme_1 = false;

    const Condition& condition(std::string_view name) const;
};

/// Evaluates every condition of the three variants plus the two convolution
/// constraints (M = X^{1-n}) and the Fouvry ranges. Exponents must lie in
/// (0,1) for n and q, [0,1] for a, and [0,1) for epsilon; else InvalidExponent.
CorollaryCheck check_corollary_conditions(const Rational& n_exp, const Rational& q_exp, const Rational& a_exp,
                                          const Rational& epsilon, Corollary c);

} // namespace klab
