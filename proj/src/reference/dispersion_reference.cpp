#include "klab/reference.hpp"

#include "klab/errors.hpp"

#include <cmath>
#include <numeric>

namespace klab::reference {

namespace {

bool congruent(i64 x, i64 a, u64 q) { return reduce(x, q) == reduce(a, q); }

bool coprime(i64 x, u64 q) { return std::gcd(reduce(x, q), q) == 1; }

} // namespace

cd eval_E(const CoefficientSequence& alpha, const CoefficientSequence& beta, u64 q, i64 a)
{
    cd progression, coprime_part;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        for (std::size_t j = 0; j < beta.size(); ++j) {
            const i64 mn = alpha.indices()[i] * beta.indices()[j];
            const cd term = alpha.values()[i] * beta.values()[j];
            if (congruent(mn, a, q))
                progression += term;
            if (coprime(mn, q))
                coprime_part += term;
        }
    return progression - coprime_part / static_cast<double>(euler_phi(q));
}

double eval_Delta(const CoefficientSequence& alpha, const CoefficientSequence& beta, const Support& moduli, i64 a)
{
    double total = 0;
    for (i64 q : moduli.indices())
        if (coprime(a, static_cast<u64>(q)))
            total += std::abs(reference::eval_E(alpha, beta, static_cast<u64>(q), a));
    return total;
}

DispersionSplit eval_UVW(const CoefficientSequence& alpha, const CoefficientSequence& beta, const Support& moduli,
                         i64 a, const SmoothCutoff& psi, double M_scale)
{
    if (!psi.majorizes_dyadic())
        throw PsiDoesNotMajorize("cutoff plateau does not cover [1, 2]");
    DispersionSplit out;
    for (i64 q : moduli.indices()) {
        int c = 0;
        if (coprime(a, static_cast<u64>(q)))
            c = reference::eval_E(alpha, beta, static_cast<u64>(q), a).real() >= 0.0 ? 1 : -1;
        out.c.emplace_back(static_cast<u64>(q), c);
    }
    const auto m_lo = static_cast<i64>(std::floor(psi.support_lo() * M_scale)) + 1;
    const auto m_hi = static_cast<i64>(std::ceil(psi.support_hi() * M_scale)) - 1;
    for (i64 m = m_lo; m <= m_hi; ++m) {
        const double weight = psi(static_cast<double>(m) / M_scale);
        cd X, Y;
        for (const auto& [q, c] : out.c)
            for (std::size_t j = 0; j < beta.size(); ++j) {
                const i64 mn = m * beta.indices()[j];
                if (congruent(mn, a, q))
                    X += static_cast<double>(c) * beta.values()[j];
                if (coprime(mn, q))
                    Y += static_cast<double>(c) * beta.values()[j] / static_cast<double>(euler_phi(q));
            }
        out.U += weight * std::norm(Y);
        out.W += weight * std::norm(X);
        out.V += weight * X * std::conj(Y);
        out.direct_quadratic += weight * std::norm(X - Y);
    }
    return out;
}

} // namespace klab::reference
