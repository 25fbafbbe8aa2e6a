#include "klab/dispersion.hpp"

#include "klab/errors.hpp"
#include "klab/kahan.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>
#include <stdexcept>

namespace klab {

namespace {

// Sums of a sequence over each residue class mod q.
std::vector<cd> residue_table(const CoefficientSequence& s, u64 q)
{
    std::vector<KahanSum<cd>> acc(q);
    const auto idx = s.indices();
    const auto val = s.values();
    for (std::size_t i = 0; i < idx.size(); ++i)
        acc[reduce(idx[i], q)].add(val[i]);
    std::vector<cd> out(q);
    for (u64 r = 0; r < q; ++r)
        out[r] = acc[r].value();
    return out;
}

cd coprime_total(const std::vector<cd>& table, u64 q)
{
    KahanSum<cd> acc;
    for (u64 r = 0; r < q; ++r)
        if (std::gcd(r, q) == 1)
            acc.add(table[r]);
    return acc.value();
}

bool coprime_to(i64 a, u64 q) { return std::gcd(reduce(a, q), q) == 1; }

} // namespace

cd eval_E(const CoefficientSequence& alpha, const CoefficientSequence& beta, u64 q, i64 a)
{
    if (q == 0)
        throw std::invalid_argument("eval_E: q must be >= 1");
    const auto A = residue_table(alpha, q);
    const auto B = residue_table(beta, q);
    const u64 target = reduce(a, q);

    KahanSum<cd> progression;
    if (std::gcd(target, q) == 1) {
        // mn = a forces m to be a unit, and then n = a m^{-1}
        for (u64 r = 0; r < q; ++r) {
            if (std::gcd(r, q) != 1)
                continue;
            const u64 inv = mod_inverse(static_cast<i64>(r), q).value;
            progression.add(A[r] * B[mulmod(target, inv, q)]);
        }
    } else {
        for (u64 r = 0; r < q; ++r)
            for (u64 s = 0; s < q; ++s)
                if (mulmod(r, s, q) == target)
                    progression.add(A[r] * B[s]);
    }
    const cd main = coprime_total(A, q) * coprime_total(B, q) / static_cast<double>(euler_phi(q));
    return progression.value() - main;
}

double eval_Delta(const CoefficientSequence& alpha, const CoefficientSequence& beta, const Support& moduli, i64 a)
{
    const auto& qs = moduli.indices();
    std::vector<double> parts(qs.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < qs.size(); ++i) {
        const u64 q = static_cast<u64>(qs[i]);
        if (coprime_to(a, q))
            parts[i] = std::abs(eval_E(alpha, beta, q, a));
    }
    return ordered_sum<double>(parts);
}

DispersionSplit eval_UVW(const CoefficientSequence& alpha, const CoefficientSequence& beta, const Support& moduli,
                         i64 a, const SmoothCutoff& psi, double M_scale)
{
    if (!(M_scale > 0))
        throw std::invalid_argument("eval_UVW: M_scale must be positive");
    if (!psi.majorizes_dyadic())
        throw PsiDoesNotMajorize(fmt::format("cutoff plateau [{}, {}] does not cover [1, 2]", psi.plateau_lo(),
                                             psi.plateau_hi()));
    for (std::size_t i = 0; i < alpha.size(); ++i)
        if (alpha.values()[i] != cd{} && psi(static_cast<double>(alpha.indices()[i]) / M_scale) < 1.0)
            throw PsiDoesNotMajorize(
                fmt::format("psi(m/M) < 1 at m={} of the alpha support (M={})", alpha.indices()[i], M_scale));

    DispersionSplit out;
    struct Modulus {
        u64 q;
        double c;
        std::vector<cd> table;
        cd coprime_over_phi;
    };
    std::vector<Modulus> active;
    for (i64 qi : moduli.indices()) {
        const u64 q = static_cast<u64>(qi);
        int c = 0;
        if (coprime_to(a, q))
            c = eval_E(alpha, beta, q, a).real() >= 0.0 ? 1 : -1;
        out.c.emplace_back(q, c);
        if (c == 0)
            continue;
        auto table = residue_table(beta, q);
        const cd cop = coprime_total(table, q) / static_cast<double>(euler_phi(q));
        active.push_back({q, static_cast<double>(c), std::move(table), cop});
    }

    const auto m_lo = static_cast<i64>(std::floor(psi.support_lo() * M_scale)) + 1;
    const auto m_hi = static_cast<i64>(std::ceil(psi.support_hi() * M_scale)) - 1;
    const std::size_t count = m_hi >= m_lo ? static_cast<std::size_t>(m_hi - m_lo + 1) : 0;
    std::vector<double> u(count, 0.0), w(count, 0.0), d(count, 0.0);
    std::vector<cd> v(count);

#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < count; ++k) {
        const i64 m = m_lo + static_cast<i64>(k);
        const double weight = psi(static_cast<double>(m) / M_scale);
        if (weight <= 0.0)
            continue;
        KahanSum<cd> X, Y;
        for (const auto& md : active) {
            const auto inv = try_mod_inverse(m, md.q);
            if (!inv)
                continue;
            X.add(md.c * md.table[mulmod(reduce(a, md.q), *inv, md.q)]);
            Y.add(md.c * md.coprime_over_phi);
        }
        const cd x = X.value(), y = Y.value();
        u[k] = weight * std::norm(y);
        w[k] = weight * std::norm(x);
        v[k] = weight * x * std::conj(y);
        d[k] = weight * std::norm(x - y);
    }
    out.U = ordered_sum<double>(u);
    out.W = ordered_sum<double>(w);
    out.V = ordered_sum<cd>(v);
    out.direct_quadratic = ordered_sum<double>(d);
    return out;
}

double cauchy_schwarz_gap(const DispersionSplit& split, double alpha_l2, double delta)
{
    const double quad = split.quadratic();
    const double slack = 1e-9 * std::max(1.0, split.W + split.U);
    if (quad < -slack)
        throw NegativeQuadratic(fmt::format("W - 2 Re V + U = {} is negative", quad));
    return alpha_l2 * std::sqrt(std::max(0.0, quad)) - delta;
}

namespace {

constexpr long double two_pi_l = 2.0L * std::numbers::pi_v<long double>;

// e(x/d) in extended precision with the numerator folded to (-d/2, d/2]
std::complex<long double> unit_phase_l(u64 x, u64 d)
{
    const u64 r = x % d;
    const long double folded = 2 * r > d ? static_cast<long double>(r) - static_cast<long double>(d)
                                         : static_cast<long double>(r);
    return std::polar(1.0L, two_pi_l * folded / static_cast<long double>(d));
}

struct MRange {
    i64 lo, hi;
};

MRange support_range(const SmoothCutoff& psi, double M_scale)
{
    return {static_cast<i64>(std::floor(psi.support_lo() * M_scale)) + 1,
            static_cast<i64>(std::ceil(psi.support_hi() * M_scale)) - 1};
}

void require_positive_scale(double M_scale)
{
    if (!(M_scale > 0))
        throw std::invalid_argument("cutoff scale M must be positive");
}

} // namespace

FourierCompletion fourier_complete_ap(const SmoothCutoff& psi, double M_scale, u64 q, i64 a, u64 H)
{
    require_positive_scale(M_scale);
    if (q == 0 || H == 0)
        throw std::invalid_argument("fourier_complete_ap: q and H must be >= 1");
    FourierCompletion out;
    if (psi.is_zero())
        return out;

    const long double M = M_scale;
    const u64 r = reduce(a, q);
    const auto [lo, hi] = support_range(psi, M_scale);
    KahanSum<long double> lhs;
    const i64 first = lo + static_cast<i64>(reduce(static_cast<i64>(r) - lo, q));
    for (i64 m = first; m <= hi; m += static_cast<i64>(q))
        lhs.add(psi.value(static_cast<long double>(m) / M));

    KahanSum<long double> freq;
    freq.add(psi.fourier(0.0L).real());
    for (u64 h = 1; h <= H; ++h) {
        const long double xi = static_cast<long double>(h) * M / static_cast<long double>(q);
        const auto term = unit_phase_l(mulmod(r, h % q, q), q) * psi.fourier(xi);
        // h and -h together give twice the real part
        freq.add(2.0L * term.real());
    }
    const long double rhs = M / static_cast<long double>(q) * freq.value();
    out.lhs = static_cast<double>(lhs.value());
    out.rhs = static_cast<double>(rhs);
    out.residual = static_cast<double>(std::abs(lhs.value() - rhs));
    return out;
}

CoprimeCompletion fourier_coprime(const SmoothCutoff& psi, double M_scale, u64 q)
{
    require_positive_scale(M_scale);
    if (q == 0)
        throw std::invalid_argument("fourier_coprime: q must be >= 1");
    CoprimeCompletion out;
    out.error_bound = static_cast<double>(tau(q)) * std::pow(std::log(2.0 * M_scale), 2);
    if (psi.is_zero())
        return out;

    const long double M = M_scale;
    const auto [lo, hi] = support_range(psi, M_scale);
    KahanSum<long double> lhs;
    for (i64 m = lo; m <= hi; ++m)
        if (std::gcd(static_cast<u64>(m), q) == 1)
            lhs.add(psi.value(static_cast<long double>(m) / M));
    const long double main =
        static_cast<long double>(euler_phi(q)) / static_cast<long double>(q) * psi.fourier(0.0L).real() * M;
    out.lhs = static_cast<double>(lhs.value());
    out.main = static_cast<double>(main);
    out.constant = static_cast<double>(std::abs(lhs.value() - main)) / out.error_bound;
    return out;
}

double compute_H(double L, double Q, double M)
{
    if (!(L > 0 && Q > 0 && M > 0))
        throw std::invalid_argument("compute_H: inputs must be positive");
    return 4.0 * std::pow(L, 4) * Q * Q / M;
}

double estar_sw_proxy(double N, double Q, double A)
{
    if (!(N > 1))
        throw std::invalid_argument("estar_sw_proxy: N must exceed 1");
    return N * N * Q * std::pow(std::log(N), -A);
}

DispersionRhs rhs_dispersion_thm(const DispersionBoundInput& in)
{
    for (double s : {in.M, in.N, in.Q, in.D, in.X})
        if (!(s >= 1.0))
            throw std::invalid_argument(fmt::format("dispersion bound sizes must be >= 1, got {}", s));
    const auto p = [](double b, double e) { return std::pow(b, e); };
    const double logk = p(std::log(in.X), in.kappa);
    const double dx = p(in.D, in.C) * p(in.X, in.epsilon);
    const double M = in.M, N = in.N, Q = in.Q;

    DispersionRhs out;
    Rhs& rhs = out.rhs;
    rhs.prefactor = in.alpha_l2;
    const std::vector<std::pair<std::string, double>> raw = {
        {"MQ^(-1)E*", M / Q * in.Estar},
        {"(logX)^k N^2 Q", logk * N * N * Q},
        {"(logX)^k N^2 D^(-1/2) M", logk * N * N * M / std::sqrt(in.D)},
        {"D^C X^e Q^(15/8) N^(11/4)", dx * p(Q, 15.0 / 8) * p(N, 11.0 / 4)},
        {"D^C X^e M^(3/20) Q^(33/20) N^(51/20)", dx * p(M, 3.0 / 20) * p(Q, 33.0 / 20) * p(N, 51.0 / 20)},
    };
    KahanSum<double> inner;
    for (const auto& [name, r] : raw) {
        rhs.terms.push_back({name, r, r});
        inner.add(r);
    }
    rhs.total = in.alpha_l2 * std::sqrt(inner.value());

    out.original_terms = {
        {"D^C X^e Q^(15/8) N^(23/8)", dx * p(Q, 15.0 / 8) * p(N, 23.0 / 8), 0},
        {"D^C X^e M^(3/20) Q^(33/20) N^(59/20)", dx * p(M, 3.0 / 20) * p(Q, 33.0 / 20) * p(N, 59.0 / 20), 0},
    };
    for (std::size_t k = 0; k < out.original_terms.size(); ++k) {
        auto& t = out.original_terms[k];
        t.value = t.raw;
        out.savings.push_back(t.raw > 0 ? rhs.terms[3 + k].raw / t.raw : 0.0);
    }

    if (!(M > Q * p(M * N, in.epsilon)))
        rhs.flags.emplace_back("M<=Q(MN)^eps");
    if (!(M > N))
        rhs.flags.emplace_back("M<=N");
    if (!(std::log(N) > 10.0 * std::log(in.D)))
        rhs.flags.emplace_back("N<=D^10");
    if (!(std::log(in.D) < 10.0 * std::log(N)))
        rhs.flags.emplace_back("D>=N^10");
    return out;
}

} // namespace klab
