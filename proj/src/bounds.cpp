#include "klab/bounds.hpp"

#include "klab/errors.hpp"
#include "klab/kahan.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace klab {

const RhsTerm& Rhs::term(std::string_view name) const
{
    for (const auto& t : terms)
        if (t.name == name)
            return t;
    throw std::out_of_range(fmt::format("no rhs term named '{}'", name));
}

BoundReport make_report(double lhs, Rhs rhs, std::vector<std::pair<std::string, double>> point)
{
    BoundReport r;
    r.lhs = lhs;
    r.ratio = rhs.total > 0 ? lhs / rhs.total : 0.0;
    r.rhs = std::move(rhs);
    r.point = std::move(point);
    return r;
}

std::string to_string(ExponentVariant v)
{
    return v == ExponentVariant::theorem_statement ? "statement" : "proof";
}

ExponentVariant parse_exponent_variant(std::string_view s)
{
    if (s == "statement" || s == "theorem_statement")
        return ExponentVariant::theorem_statement;
    if (s == "proof" || s == "proof_final")
        return ExponentVariant::proof_final;
    throw std::invalid_argument(fmt::format("unknown exponent variant '{}'", s));
}

namespace {

void require_sizes(std::initializer_list<double> sizes)
{
    for (double s : sizes)
        if (!(s >= 1.0))
            throw std::invalid_argument(fmt::format("bound parameters must be >= 1, got {}", s));
}

double p(double base, double exponent) { return std::pow(base, exponent); }

Rhs assemble(double prefactor, std::vector<std::pair<std::string, double>> raw_terms)
{
    Rhs out;
    out.prefactor = prefactor;
    KahanSum<double> total;
    for (auto& [name, raw] : raw_terms) {
        const double v = prefactor * raw;
        out.terms.push_back({std::move(name), raw, v});
        total.add(v);
    }
    out.total = total.value();
    return out;
}

} // namespace

Rhs rhs_theorem_BC(double M, double N, double A, i64 theta, Norms norms, double epsilon)
{
    require_sizes({M, N, A});
    const double th = std::abs(static_cast<double>(theta));
    const double amn = A * M * N;
    const double prefactor = norms.alpha * norms.beta * norms.nu * std::sqrt(1.0 + th * A / (M * N));
    return assemble(prefactor, {
                                   {"AMN^(7/20+e)(M+N)^(1/4)", p(amn, 7.0 / 20 + epsilon) * p(M + N, 0.25)},
                                   {"AMN^(3/8+e)(AN+AM)^(1/8)", p(amn, 3.0 / 8 + epsilon) * p(A * N + A * M, 0.125)},
                               });
}

Rhs rhs_theorem_BCR(double M, double N, double A, double R, i64 theta, Norms norms, double epsilon,
                    BcrOptions options)
{
    require_sizes({M, N, A, R});
    const double th = std::abs(static_cast<double>(theta));
    const double a_exp = options.variant == ExponentVariant::theorem_statement ? 1.0 / 20 : 3.0 / 10;
    const double prefactor = p(M, epsilon) * norms.alpha * norms.beta * norms.nu * std::sqrt(A * M * N) *
                             p(R, 0.25) * p(1.0 + th * A / (M * N), 0.25);
    Rhs out = assemble(prefactor, {
                                      {"N^(-1/8)", p(N, -1.0 / 8)},
                                      {"R^(1/8)N^(1/8)M^(-1/4)", p(R, 1.0 / 8) * p(N, 1.0 / 8) * p(M, -0.25)},
                                      {"M^(1/10)R^(-3/20)A^(-x)N^(-3/20)",
                                       p(M, 0.1) * p(R, -3.0 / 20) * p(A, -a_exp) * p(N, -3.0 / 20)},
                                      {"N^(3/20)A^(-3/20)M^(-1/5)", p(N, 3.0 / 20) * p(A, -3.0 / 20) * p(M, -0.2)},
                                      {"N^(3/8)M^(-1/2)", p(N, 3.0 / 8) * p(M, -0.5)},
                                  });
    if (M > N * N)
        out.flags.emplace_back("M>N^2");
    if (std::log(R) > options.hypothesis_power * std::log(M))
        out.flags.emplace_back(fmt::format("R>M^{}", options.hypothesis_power));
    return out;
}

Rhs rhs_Cb_bound(double M, double N, double A, double b, i64 theta, double beta_norm, double nu_norm,
                 double epsilon)
{
    require_sizes({M, N, A, b});
    const double th = std::abs(static_cast<double>(theta));
    const double prefactor = beta_norm * beta_norm * nu_norm * nu_norm * p(M, epsilon) *
                             std::sqrt(1.0 + th * A / (b * M * N));
    return assemble(prefactor, {
                                   {"AM(bN)^(1/2)", A * M * std::sqrt(b * N)},
                                   {"b^(3/4)AM^(1/2)N^(5/4)", p(b, 0.75) * A * std::sqrt(M) * p(N, 1.25)},
                                   {"AM^(6/5)N^(1/10)b^(-2/5)", A * p(M, 1.2) * p(N, 0.1) * p(b, -0.4)},
                                   {"b^(1/5)A^(2/5)M^(6/5)N^(7/10)", p(b, 0.2) * p(A, 0.4) * p(M, 1.2) * p(N, 0.7)},
                                   {"b^(1/2)A^(7/10)M^(3/5)N^(13/10)",
                                    std::sqrt(b) * p(A, 0.7) * p(M, 0.6) * p(N, 1.3)},
                                   {"b^(1/2)AN^(7/4)", std::sqrt(b) * A * p(N, 1.75)},
                               });
}

Rhs rhs_C1R_bound(double M, double N, double A, double R, i64 theta, double beta_norm, double nu_norm,
                  double epsilon)
{
    require_sizes({M, N, A, R});
    const double th = std::abs(static_cast<double>(theta));
    const double prefactor =
        p(M, epsilon) * nu_norm * nu_norm * beta_norm * beta_norm * std::sqrt(1.0 + th * A / (M * N));
    return assemble(prefactor, {
                                   {"AMR^(1/2)N^(3/4)", A * M * std::sqrt(R) * p(N, 0.75)},
                                   {"R^(3/4)AM^(1/2)N^(5/4)", p(R, 0.75) * A * std::sqrt(M) * p(N, 1.25)},
                                   {"R^(1/5)A^(2/5)M^(6/5)N^(7/10)", p(R, 0.2) * p(A, 0.4) * p(M, 1.2) * p(N, 0.7)},
                                   {"R^(1/2)A^(7/10)M^(3/5)N^(13/10)",
                                    std::sqrt(R) * p(A, 0.7) * p(M, 0.6) * p(N, 1.3)},
                                   {"R^(1/2)AN^(7/4)", std::sqrt(R) * A * p(N, 1.75)},
                               });
}

double trivial_tail_bound(double M, double N, double A, double B, double beta_norm, double nu_norm,
                          double epsilon)
{
    require_sizes({M, N, A, B});
    return beta_norm * beta_norm * nu_norm * nu_norm * A * N * p(M, 1.0 + epsilon) / std::sqrt(B);
}

double decomposition_majorant(std::span<const DecompositionPiece> pieces, u64 R)
{
    std::set<u64> bs;
    KahanSum<double> weighted;
    for (const auto& pc : pieces) {
        bs.insert(pc.b);
        weighted.add(std::sqrt(static_cast<double>(pc.b)) * pc.mean_square);
    }
    KahanSum<double> inv_sqrt;
    for (u64 b : bs)
        inv_sqrt.add(1.0 / std::sqrt(static_cast<double>(b)));
    return static_cast<double>(tau(R)) * inv_sqrt.value() * weighted.value();
}

ImpliedConstant implied_constant_estimate(std::span<const BoundReport> reports)
{
    if (reports.empty())
        throw EmptyList("implied_constant_estimate: no reports");
    ImpliedConstant out;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (!(reports[i].rhs.total > 0))
            throw ZeroRHS(fmt::format("report {} has a zero right-hand side", i), i);
        const double ratio = reports[i].lhs / reports[i].rhs.total;
        if (i == 0 || ratio > out.value) {
            out.value = ratio;
            out.argmax = i;
        }
    }
    out.point = reports[out.argmax].point;
    return out;
}

} // namespace klab
