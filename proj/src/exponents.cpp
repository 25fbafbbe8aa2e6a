#include "klab/exponents.hpp"

#include "klab/errors.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace klab {

std::string to_string(Corollary c) { return c == Corollary::fr_cor11 ? "fr" : "new"; }

std::string to_string(RangeVariant v)
{
    switch (v) {
    case RangeVariant::i:
        return "i";
    case RangeVariant::ii:
        return "ii";
    case RangeVariant::iii:
        return "iii";
    }
    return "?";
}

Corollary parse_corollary(std::string_view s)
{
    if (s == "fr" || s == "FR_cor11" || s == "fr_cor11")
        return Corollary::fr_cor11;
    if (s == "new" || s == "new_cor")
        return Corollary::new_cor;
    throw std::invalid_argument(fmt::format("unknown corollary '{}'", s));
}

LinearCeiling variant_i_line(Corollary c)
{
    if (c == Corollary::fr_cor11)
        return {Rational(17, 36), Rational(-11, 12)};
    return {Rational(17, 28), Rational(-33, 28)};
}

Rational variant_q_cap(Corollary c)
{
    return c == Corollary::fr_cor11 ? Rational(53, 105) : Rational(45, 89);
}

Rational variant_n_cap(RangeVariant v)
{
    switch (v) {
    case RangeVariant::ii:
        return Rational(7, 90);
    case RangeVariant::iii:
        return Rational(101, 630);
    case RangeVariant::i:
        break;
    }
    throw std::invalid_argument("variant (i) has no fixed N cap");
}

namespace {

void require_open_unit(const Rational& x, const char* what)
{
    if (!(x > Rational(0) && x < Rational(1)))
        throw InvalidExponent(fmt::format("{} exponent must lie in (0,1), got {}", what, x.str()));
}

} // namespace

NCeiling admissible_N_exponent(Corollary c, RangeVariant v, const Rational& q_exp)
{
    require_open_unit(q_exp, "Q");
    NCeiling out;
    if (v == RangeVariant::i) {
        out.ceiling = variant_i_line(c).at(q_exp);
    } else {
        out.ceiling = variant_n_cap(v);
        out.q_cap = variant_q_cap(c);
        out.q_admissible = q_exp <= *out.q_cap;
    }
    out.feasible = out.ceiling > Rational(0) && out.q_admissible.value_or(true);
    return out;
}

Rational extremal_q_exponent(Corollary c)
{
    return variant_i_line(c).root();
}

LinearCeiling ceiling_from_constraint(const Monomial& lhs)
{
    // cm (1 - n) + cq q + cn n < 1
    const Rational cm = lhs.exponent("M");
    const Rational cq = lhs.exponent("Q");
    const Rational cn = lhs.exponent("N");
    const Rational gap = cn - cm;
    if (!(gap > Rational(0)))
        throw std::domain_error(fmt::format("constraint {} does not bound N from above", lhs.str()));
    return {(Rational(1) - cm) / gap, -cq / gap};
}

std::vector<Monomial> dispersion_error_terms()
{
    return {
        Monomial{{"Q", Rational(15, 8)}, {"N", Rational(11, 4)}},
        Monomial{{"M", Rational(3, 20)}, {"Q", Rational(33, 20)}, {"N", Rational(51, 20)}},
    };
}

std::vector<Monomial> original_dispersion_error_terms(OriginalDisplay d)
{
    const Rational m_exp = d == OriginalDisplay::comparison ? Rational(3, 20) : Rational(3, 10);
    return {
        Monomial{{"Q", Rational(15, 8)}, {"N", Rational(23, 8)}},
        Monomial{{"M", m_exp}, {"Q", Rational(33, 20)}, {"N", Rational(59, 20)}},
    };
}

std::vector<Monomial> convolution_constraints()
{
    const Monomial alpha_norm = Monomial::var("M", Rational(1, 2));
    std::vector<Monomial> out;
    for (const auto& t : dispersion_error_terms())
        out.push_back(alpha_norm * t.pow(Rational(1, 2)));
    return out;
}

std::vector<Monomial> c1r_bound_terms()
{
    return {
        Monomial{{"A", 1}, {"M", 1}, {"R", Rational(1, 2)}, {"N", Rational(3, 4)}},
        Monomial{{"R", Rational(3, 4)}, {"A", 1}, {"M", Rational(1, 2)}, {"N", Rational(5, 4)}},
        Monomial{{"R", Rational(1, 5)}, {"A", Rational(2, 5)}, {"M", Rational(6, 5)}, {"N", Rational(7, 10)}},
        Monomial{{"R", Rational(1, 2)}, {"A", Rational(7, 10)}, {"M", Rational(3, 5)}, {"N", Rational(13, 10)}},
        Monomial{{"R", Rational(1, 2)}, {"A", 1}, {"N", Rational(7, 4)}},
    };
}

Monomial c1r_common_factor()
{
    return Monomial{{"A", 1}, {"M", 1}, {"N", 1}, {"R", Rational(1, 2)}};
}

std::vector<Monomial> bcr_bracket_terms(ExponentVariant v)
{
    const Rational a_exp = v == ExponentVariant::theorem_statement ? Rational(-1, 20) : Rational(-3, 10);
    return {
        Monomial{{"N", Rational(-1, 8)}},
        Monomial{{"R", Rational(1, 8)}, {"N", Rational(1, 8)}, {"M", Rational(-1, 4)}},
        Monomial{{"M", Rational(1, 10)}, {"R", Rational(-3, 20)}, {"A", a_exp}, {"N", Rational(-3, 20)}},
        Monomial{{"N", Rational(3, 20)}, {"A", Rational(-3, 20)}, {"M", Rational(-1, 5)}},
        Monomial{{"N", Rational(3, 8)}, {"M", Rational(-1, 2)}},
    };
}

Rational fouvry_q_ceiling(FouvryResult r, const Rational& n_exp)
{
    const Rational sqrt_nx = (n_exp + Rational(1)) / Rational(2);
    const Rational power = r == FouvryResult::corollaire_1 ? Rational(4, 7) - Rational(6, 7) * n_exp
                                                           : Rational(5, 8) - Rational(3, 4) * n_exp;
    return min(sqrt_nx, power);
}

Rational fouvry_n_ceiling(FouvryResult r, const Rational& q_exp)
{
    if (r == FouvryResult::corollaire_1)
        return (Rational(4, 7) - q_exp) * Rational(7, 6);
    return (Rational(5, 8) - q_exp) * Rational(4, 3);
}

const Condition& CorollaryCheck::condition(std::string_view name) const
{
    for (const auto& c : conditions)
        if (c.name == name)
            return c;
    throw std::out_of_range(fmt::format("no condition named '{}'", name));
}

CorollaryCheck check_corollary_conditions(const Rational& n_exp, const Rational& q_exp, const Rational& a_exp,
                                          const Rational& epsilon, Corollary c)
{
    require_open_unit(n_exp, "N");
    require_open_unit(q_exp, "Q");
    if (a_exp < Rational(0) || a_exp > Rational(1))
        throw InvalidExponent(fmt::format("a exponent must lie in [0,1], got {}", a_exp.str()));
    if (epsilon < Rational(0) || epsilon >= Rational(1))
        throw InvalidExponent(fmt::format("epsilon must lie in [0,1), got {}", epsilon.str()));

    CorollaryCheck out;
    auto le = [&](std::string name, const Rational& lhs, const Rational& rhs) {
        out.conditions.push_back({std::move(name), lhs <= rhs, rhs - lhs});
        return lhs <= rhs;
    };
    auto lt = [&](std::string name, const Rational& lhs, const Rational& rhs) {
        out.conditions.push_back({std::move(name), lhs < rhs, rhs - lhs});
        return lhs < rhs;
    };

    const bool n_positive = lt("N>1", Rational(0), n_exp);
    const bool a_ok = le("|a|<=X/12", a_exp, Rational(1));
    const bool a_small = le("|a|<=X^(eps/1000)", a_exp, epsilon / Rational(1000));
    const Rational q_cap = variant_q_cap(c) - epsilon;

    const bool v1 = le("(i) N-ceiling", n_exp, variant_i_line(c).at(q_exp) - epsilon);
    const bool n2 = le("(ii) N-cap", n_exp, variant_n_cap(RangeVariant::ii) - epsilon);
    const bool n3 = le("(iii) N-cap", n_exp, variant_n_cap(RangeVariant::iii) - epsilon);
    const bool q23 = le("(ii)/(iii) Q-cap", q_exp, q_cap);

    if (n_positive && a_ok && v1)
        out.satisfied.push_back(RangeVariant::i);
    if (n_positive && a_ok && n2 && q23)
        out.satisfied.push_back(RangeVariant::ii);
    if (n_positive && a_small && n3 && q23)
        out.satisfied.push_back(RangeVariant::iii);

    // M = X^{1-n}; each constraint is M^cm Q^cq N^cn < X^{1-eps}
    const auto constraints = convolution_constraints();
    for (std::size_t k = 0; k < constraints.size(); ++k) {
        const Monomial& mono = constraints[k];
        const Rational lhs = mono.exponent("M") * (Rational(1) - n_exp) + mono.exponent("Q") * q_exp +
                             mono.exponent("N") * n_exp;
        lt(fmt::format("MQN{}", k + 1), lhs, Rational(1) - epsilon);
    }

    const bool n_beyond_eps = n_exp > epsilon;
    out.fouvry_corollaire_1 =
        le("Fouvry Q<=min(sqrt(NX),X^(4/7)N^(-6/7))", q_exp, fouvry_q_ceiling(FouvryResult::corollaire_1, n_exp)) &&
        n_beyond_eps;
    out.fouvry_theoreme_1 =
        le("Fouvry Q<=min(sqrt(NX),X^(5/8)N^(-3/4))", q_exp, fouvry_q_ceiling(FouvryResult::theoreme_1, n_exp)) &&
        n_beyond_eps;
    return out;
}

} // namespace klab
