#include "klab/verify.hpp"

#include "klab/bounds.hpp"
#include "klab/dispersion.hpp"
#include "klab/errors.hpp"
#include "klab/exponents.hpp"
#include "klab/forms.hpp"
#include "klab/reference.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>

namespace klab {

bool SuiteReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

namespace {

void check(SuiteReport& r, std::string name, bool pass, std::string detail = {})
{
    r.checks.push_back({std::move(name), pass, std::move(detail)});
}

CoefficientSequence seq(const SequenceKind& k, i64 base) { return build_sequence(k, Support(DyadicRange(base))); }

SuiteReport arith_suite()
{
    SuiteReport r{"arith", {}, {}};
    std::mt19937_64 gen(20240611);
    std::size_t bad = 0, tried = 0;
    while (tried < 10000) {
        const u64 m = 2 + gen() % 100000;
        const i64 a = static_cast<i64>(gen() % 2000001) - 1000000;
        if (std::gcd(reduce(a, m), m) != 1)
            continue;
        ++tried;
        if (mulmod(reduce(a, m), mod_inverse(a, m).value, m) != 1)
            ++bad;
    }
    check(r, "a*inv(a) = 1 (mod m)", bad == 0, fmt::format("{} random pairs, {} failures", tried, bad));

    bad = 0;
    for (u64 m = 1; m <= 200; ++m)
        for (u64 n = 1; n <= 200; ++n) {
            if (std::gcd(m, n) != 1)
                continue;
            const u64 mn = m * n;
            const u64 lhs = (m * mod_inverse(static_cast<i64>(m), n).value + n * mod_inverse(static_cast<i64>(n), m).value) % mn;
            if (lhs != 1 % mn)
                ++bad;
        }
    check(r, "m inv(m mod n) + n inv(n mod m) = 1 (mod mn)", bad == 0, fmt::format("m,n <= 200, {} failures", bad));

    bad = 0;
    for (u64 m : {7ULL, 30ULL, 97ULL, 1000ULL, 65536ULL}) {
        std::vector<i64> vals;
        while (vals.size() < 200) {
            const i64 v = static_cast<i64>(gen() % 1000000);
            if (std::gcd(reduce(v, m), m) == 1)
                vals.push_back(v);
        }
        const auto batch = batch_mod_inverse(vals, m);
        for (std::size_t i = 0; i < vals.size(); ++i)
            if (batch[i] != mod_inverse(vals[i], m))
                ++bad;
    }
    check(r, "batch inverse = elementwise inverse", bad == 0, fmt::format("1000 inputs, {} mismatches", bad));

    bad = 0;
    const u64 limit = 100000;
    for (u64 n = 1; n <= limit; ++n) {
        const auto s = squarefree_squarefull_split(n);
        if (s.squarefree_part * s.squarefull_part != n || std::gcd(s.squarefree_part, s.squarefull_part) != 1 ||
            !is_squarefree(s.squarefree_part) || !is_squarefull(s.squarefull_part))
            ++bad;
    }
    check(r, "squarefree x squarefull split", bad == 0, fmt::format("n <= {}, {} failures", limit, bad));

    check(r, "tau_k spot values", tau_k(6, 2) == 4 && tau_k(4, 3) == 6 && tau_k(1, 5) == 1,
          fmt::format("tau(6)={}, tau_3(4)={}", tau_k(6, 2), tau_k(4, 3)));
    return r;
}

SuiteReport decomposition_suite()
{
    SuiteReport r{"decomposition", {}, {}};
    r.table.push_back(fmt::format("{:>4} {:>4} {:>3} {:>3} {:>3} {:>11} {:>22} {:>22} {:>10}", "M", "N", "A", "R",
                                  "th", "seq", "direct", "decomposed", "rel.err"));
    std::size_t points = 0, bad = 0;
    double worst = 0;
    for (const char* kind_name : {"ones", "random_unit"})
        for (i64 M : {4, 8, 16})
            for (i64 N : {4, 8, 16})
                for (i64 A : {2, 4})
                    for (u64 R : {1, 2, 3, 6, 12})
                        for (i64 th : {1, -3}) {
                            const bool ones = std::string_view(kind_name) == "ones";
                            const u64 s = static_cast<u64>(M * 1000003 + N * 1009 + A * 17 + static_cast<i64>(R));
                            auto k = [&](u64 role) -> SequenceKind {
                                if (ones)
                                    return kind::Ones{};
                                return kind::RandomUnit{s * 3 + role};
                            };
                            const TrilinearSpec spec{seq(k(0), M), seq(k(1), N), seq(k(2), A), th, R};
                            const double direct = eval_C1R_direct(spec);
                            const double dec = eval_C1R_decomposed(spec);
                            const double err = std::abs(direct - dec) / (1.0 + std::abs(direct));
                            worst = std::max(worst, err);
                            ++points;
                            if (!(err <= 1e-9))
                                ++bad;
                            r.table.push_back(fmt::format("{:>4} {:>4} {:>3} {:>3} {:>3} {:>11} {:>22.15g} {:>22.15g} {:>10.2e}",
                                                          M, N, A, R, th, kind_name, direct, dec, err));
                        }
    check(r, "C_1R direct = decomposed", bad == 0,
          fmt::format("{} points, {} failures, worst |diff|/(1+|direct|) = {:.3e}", points, bad, worst));
    return r;
}

struct ToyGrid {
    i64 M, N, Q, a;
    SequenceKind alpha, beta;
    std::string label;
};

std::vector<ToyGrid> toy_grids()
{
    std::vector<ToyGrid> out;
    const std::vector<std::pair<SequenceKind, std::string>> kinds = {
        {kind::Ones{}, "ones"}, {kind::Moebius{}, "moebius"}, {kind::TauK{2}, "tau2"}, {kind::TauK{3}, "tau3"}};
    const i64 Ms[] = {4, 6, 8, 10, 12};
    const i64 Ns[] = {2, 3, 4, 5};
    const i64 Qs[] = {3, 4, 5, 6, 8};
    const i64 as[] = {1, 2, 3, -1};
    for (int i = 0; i < 20; ++i) {
        const auto& ka = kinds[static_cast<std::size_t>(i) % 4];
        const auto& kb = kinds[static_cast<std::size_t>(i / 4) % 4];
        out.push_back({Ms[i % 5], Ns[i % 4], Qs[(i / 2) % 5], as[(i / 3) % 4], ka.first, kb.first,
                       ka.second + "x" + kb.second});
    }
    return out;
}

SuiteReport cauchy_schwarz_suite()
{
    SuiteReport r{"cauchy_schwarz", {}, {}};
    std::mt19937_64 gen(777);
    std::size_t bad = 0;
    double worst = -1e300;
    for (int i = 0; i < 100; ++i) {
        const i64 M = 2 + static_cast<i64>(gen() % 15), N = 2 + static_cast<i64>(gen() % 15),
                  A = 1 + static_cast<i64>(gen() % 6);
        const u64 R = 1 + gen() % 12;
        const i64 th = static_cast<i64>(gen() % 7) - 3;
        const TrilinearSpec spec{seq(kind::RandomUnit{gen()}, M), seq(kind::RandomUnit{gen()}, N),
                                 seq(kind::RandomUnit{gen()}, A), th == 0 ? 1 : th, R};
        const double lhs = std::abs(eval_trilinear_B(spec).value);
        const double rhs = spec.alpha.l2() * std::sqrt(eval_C1R_direct(spec));
        worst = std::max(worst, lhs - rhs);
        if (!(lhs <= rhs + 1e-12))
            ++bad;
    }
    check(r, "|B| <= ||alpha|| C_1R^(1/2)", bad == 0,
          fmt::format("100 random unit-norm specs, {} failures, max(|B| - bound) = {:.3e}", bad, worst));

    const auto psi = SmoothCutoff::standard();
    std::size_t bad_major = 0, bad_quad = 0;
    double worst_quad = 0;
    for (const auto& g : toy_grids()) {
        const auto alpha = seq(g.alpha, g.M), beta = seq(g.beta, g.N);
        const Support moduli(DyadicRange(g.Q));
        const double delta = eval_Delta(alpha, beta, moduli, g.a);
        const auto split = eval_UVW(alpha, beta, moduli, g.a, psi, static_cast<double>(g.M));
        const double gap = cauchy_schwarz_gap(split, alpha.l2(), delta);
        if (!(gap >= -1e-9))
            ++bad_major;
        const double rel = std::abs(split.direct_quadratic - split.quadratic()) /
                           std::max(1.0, std::abs(split.direct_quadratic));
        worst_quad = std::max(worst_quad, rel);
        if (!(rel <= 1e-9))
            ++bad_quad;
        r.table.push_back(fmt::format("M={:<3} N={:<3} Q={:<3} a={:<3} {:<16} Delta={:<14.8g} bound={:<14.8g} gap={:.3e}",
                                      g.M, g.N, g.Q, g.a, g.label, delta, delta + gap, gap));
    }
    check(r, "Delta <= ||alpha|| (W - 2 Re V + U)^(1/2)", bad_major == 0,
          fmt::format("20 toy grids, {} failures", bad_major));
    check(r, "sum psi |X - Y|^2 = W - 2 Re V + U", bad_quad == 0,
          fmt::format("20 toy grids, worst relative difference {:.3e}", worst_quad));
    return r;
}

SuiteReport dispersion_suite()
{
    SuiteReport r{"dispersion", {}, {}};
    {
        const auto ones34 = build_sequence(kind::Ones{}, Support::of({3, 4}));
        const cd e = eval_E(ones34, ones34, 5, 1);
        check(r, "E example (ones on {3,4}, q=5, a=1) = 0", std::abs(e) < 1e-12, fmt::format("E = {:.3e}", std::abs(e)));
    }
    std::size_t bad_e = 0, bad_c = 0, bad_ref = 0;
    for (const auto& g : toy_grids()) {
        const auto alpha = seq(g.alpha, g.M), beta = seq(g.beta, g.N);
        const Support moduli(DyadicRange(g.Q));
        double sum = 0;
        for (i64 q : moduli.indices())
            if (std::gcd(reduce(g.a, static_cast<u64>(q)), static_cast<u64>(q)) == 1)
                sum += std::abs(eval_E(alpha, beta, static_cast<u64>(q), g.a));
        if (sum != eval_Delta(alpha, beta, moduli, g.a) &&
            std::abs(sum - eval_Delta(alpha, beta, moduli, g.a)) > 1e-12 * std::max(1.0, sum))
            ++bad_e;
        const auto psi = SmoothCutoff::standard();
        const auto split = eval_UVW(alpha, beta, moduli, g.a, psi, static_cast<double>(g.M));
        for (const auto& [q, c] : split.c) {
            const bool unit = std::gcd(reduce(g.a, q), q) == 1;
            if ((c == 0) == unit || c < -1 || c > 1)
                ++bad_c;
        }
        const auto ref = reference::eval_UVW(alpha, beta, moduli, g.a, psi, static_cast<double>(g.M));
        const double scale = std::max(1.0, ref.W + ref.U);
        if (std::abs(ref.U - split.U) > 1e-9 * scale || std::abs(ref.W - split.W) > 1e-9 * scale ||
            std::abs(ref.V - split.V) > 1e-9 * scale || ref.c != split.c)
            ++bad_ref;
    }
    check(r, "sum over q of |E| = Delta", bad_e == 0, fmt::format("20 toy grids, {} mismatches", bad_e));
    check(r, "c_q in {-1,0,1}, zero exactly when gcd(a,q) > 1", bad_c == 0, fmt::format("{} violations", bad_c));
    check(r, "U, V, W agree with the serial reference", bad_ref == 0, fmt::format("{} mismatches", bad_ref));

    check(r, "H(1,1,1) = 4, H(2,1,1) = 64, H(1,10,100) = 4",
          compute_H(1, 1, 1) == 4 && compute_H(2, 1, 1) == 64 && std::abs(compute_H(1, 10, 100) - 4) < 1e-12);
    const double unit_rhs = rhs_dispersion_thm({}).rhs.total;
    check(r, "dispersion rhs at unit parameters = 2 ||alpha||", std::abs(unit_rhs - 2.0) < 1e-12,
          fmt::format("{:.17g}", unit_rhs));
    return r;
}

SuiteReport fourier_suite()
{
    SuiteReport r{"fourier", {}, {}};
    const auto psi = SmoothCutoff::standard();
    check(r, "psihat(0) = 3/2", std::abs(psi.fourier(0).real() - 1.5L) < 1e-15L,
          fmt::format("{:.19g}", static_cast<double>(psi.fourier(0).real())));

    const double Ms[] = {1000, 2000, 4000};
    double C = 0;
    std::size_t growth_bad = 0;
    std::string growth;
    for (u64 q : {1, 3, 5, 7}) {
        double prev = -1;
        for (double M : Ms) {
            const u64 H = std::max<u64>(64, static_cast<u64>(std::ceil(4.0 * static_cast<double>(q * q) / M)) * 64);
            const auto f = fourier_complete_ap(psi, M, q, 1, H);
            const double rm = f.residual * M;
            C = std::max(C, rm);
            r.table.push_back(fmt::format("q={} M={:<5} H={:<3} lhs={:<22.17g} rhs={:<22.17g} residual={:.3e} residual*M={:.3e}",
                                          q, M, H, f.lhs, f.rhs, f.residual, rm));
            if (prev >= 0) {
                const bool ok = rm <= 4.0 * prev;
                if (!ok)
                    ++growth_bad;
                growth += fmt::format(" q={} M={}: {}", q, M, prev > 0 ? fmt::format("{:.2f}", rm / prev) : "x/0");
            }
            prev = rm;
        }
    }
    check(r, "residual <= C/M", std::isfinite(C), fmt::format("C = {:.3e}", C));
    check(r, "residual*M grows by at most x4 per doubling", growth_bad == 0,
          fmt::format("{} of 8 doublings exceed x4; ratios:{}", growth_bad, growth));

    double worst = 0;
    for (u64 q : {1, 6, 30, 1009}) {
        const auto c = fourier_coprime(psi, 500, q);
        worst = std::max(worst, c.constant);
        r.table.push_back(fmt::format("coprime q={:<5} M=500 lhs={:<12.8g} main={:<12.8g} |gap|/bound={:.4f}", q, c.lhs,
                                      c.main, c.constant));
    }
    check(r, "|coprime sum - main| <= C tau(q) (log 2M)^2", std::isfinite(worst), fmt::format("C = {:.4f}", worst));
    return r;
}

SuiteReport exponents_suite()
{
    SuiteReport r{"exponents", {}, {}};
    auto eq = [&](std::string name, const Rational& got, const Rational& want) {
        check(r, std::move(name), got == want, fmt::format("{} (expected {})", got.str(), want.str()));
    };
    const Rational half(1, 2);
    eq("new (i) at q=1/2", admissible_N_exponent(Corollary::new_cor, RangeVariant::i, half).ceiling, Rational(1, 56));
    eq("fr (i) at q=1/2", admissible_N_exponent(Corollary::fr_cor11, RangeVariant::i, half).ceiling, Rational(1, 72));
    eq("extremal q (new)", extremal_q_exponent(Corollary::new_cor), Rational(17, 33));
    eq("extremal q (fr)", extremal_q_exponent(Corollary::fr_cor11), Rational(17, 33));
    eq("17/33 = 1/2 + 1/66", half + Rational(1, 66), Rational(17, 33));
    eq("Q cap (new)", variant_q_cap(Corollary::new_cor), Rational(45, 89));
    eq("Q cap (fr)", variant_q_cap(Corollary::fr_cor11), Rational(53, 105));
    eq("new (i) at q=45/89", variant_i_line(Corollary::new_cor).at(Rational(45, 89)), Rational(1, 89));
    eq("Fouvry Corollaire 1 q-ceiling at n=1/89", fouvry_q_ceiling(FouvryResult::corollaire_1, Rational(1, 89)),
       Rational(45, 89));
    eq("Fouvry Corollaire 1 n-ceiling at q=53/105", fouvry_n_ceiling(FouvryResult::corollaire_1, Rational(53, 105)),
       Rational(7, 90));
    eq("Fouvry Theoreme 1 n-ceiling at q=53/105", fouvry_n_ceiling(FouvryResult::theoreme_1, Rational(53, 105)),
       Rational(101, 630));

    const auto cons = convolution_constraints();
    const auto l1 = ceiling_from_constraint(cons[0]);
    const auto l2 = ceiling_from_constraint(cons[1]);
    check(r, "first convolution constraint gives n < 4/7 - (15/14) q",
          l1 == LinearCeiling{Rational(4, 7), Rational(-15, 14)}, fmt::format("{} + {} q", l1.intercept.str(), l1.slope.str()));
    check(r, "second convolution constraint gives the new (i) line", l2 == variant_i_line(Corollary::new_cor),
          fmt::format("{} + {} q", l2.intercept.str(), l2.slope.str()));

    const auto now = dispersion_error_terms();
    const auto old = original_dispersion_error_terms();
    auto at_N_eq_Q = [](const Monomial& m) { return m.exponent("N") + m.exponent("Q"); };
    eq("first replaced term saves N^(1/8) at N=Q", at_N_eq_Q(now[0]) - at_N_eq_Q(old[0]), Rational(-1, 8));
    eq("second replaced term saves N^(2/5) at N=Q", at_N_eq_Q(now[1]) - at_N_eq_Q(old[1]), Rational(-2, 5));

    const auto raw = c1r_bound_terms();
    const auto common = c1r_common_factor();
    for (ExponentVariant v : {ExponentVariant::proof_final, ExponentVariant::theorem_statement}) {
        const auto bracket = bcr_bracket_terms(v);
        std::size_t matches = 0;
        for (std::size_t k = 0; k < raw.size(); ++k)
            if ((raw[k] / common).pow(half) == bracket[k])
                ++matches;
        const bool expect_all = v == ExponentVariant::proof_final;
        check(r, fmt::format("C_1R terms square-rooted vs bracket ({} variant)", to_string(v)),
              expect_all ? matches == 5 : matches == 4,
              fmt::format("{} of 5 terms match{}", matches, expect_all ? "" : "; the A-exponent of the third differs"));
    }
    return r;
}

const std::map<std::string, std::function<SuiteReport()>, std::less<>>& suites()
{
    static const std::map<std::string, std::function<SuiteReport()>, std::less<>> table = {
        {"arith", arith_suite},
        {"decomposition", decomposition_suite},
        {"cauchy_schwarz", cauchy_schwarz_suite},
        {"dispersion", dispersion_suite},
        {"fourier", fourier_suite},
        {"exponents", exponents_suite},
    };
    return table;
}

} // namespace

const std::vector<std::string>& verify_suite_names()
{
    static const std::vector<std::string> names = {"arith",      "decomposition", "cauchy_schwarz",
                                                   "dispersion", "fourier",       "exponents"};
    return names;
}

SuiteReport run_verify_suite(std::string_view name)
{
    const auto& table = suites();
    const auto it = table.find(name);
    if (it == table.end())
        throw ConfigError(fmt::format("unknown suite '{}'", name));
    return it->second();
}

} // namespace klab
