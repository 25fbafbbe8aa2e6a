#include "klab/reference.hpp"

#include <chrono>
#include <numeric>

namespace klab::reference {

FormResult eval_trilinear_B(const TrilinearSpec& spec)
{
    spec.validate();
    const auto start = std::chrono::steady_clock::now();
    FormResult out;
    const auto a_idx = spec.nu.indices();
    const auto m_idx = spec.alpha.indices();
    const auto n_idx = spec.beta.indices();
    for (std::size_t ia = 0; ia < a_idx.size(); ++ia)
        for (std::size_t im = 0; im < m_idx.size(); ++im)
            for (std::size_t in = 0; in < n_idx.size(); ++in) {
                const u64 n = static_cast<u64>(n_idx[in]);
                if (std::gcd(static_cast<u64>(m_idx[im]), n * spec.R) != 1)
                    continue;
                const cd coeff = spec.alpha.values()[im] * spec.beta.values()[in] * spec.nu.values()[ia];
                if (coeff == cd{0.0, 0.0})
                    continue;
                out.value += coeff * kloosterman_phase(spec.theta, a_idx[ia], m_idx[im], n, spec.R);
                ++out.terms;
            }
    out.elapsed = std::chrono::steady_clock::now() - start;
    return out;
}

double eval_C1R(const TrilinearSpec& spec)
{
    spec.validate();
    double total = 0.0;
    for (i64 m : spec.alpha.indices()) {
        if (std::gcd(static_cast<u64>(m), spec.R) != 1)
            continue;
        cd inner = 0.0;
        for (std::size_t in = 0; in < spec.beta.size(); ++in) {
            const u64 n = static_cast<u64>(spec.beta.indices()[in]);
            if (std::gcd(static_cast<u64>(m), n) != 1)
                continue;
            for (std::size_t ia = 0; ia < spec.nu.size(); ++ia)
                inner += spec.beta.values()[in] * spec.nu.values()[ia] *
                         kloosterman_phase(spec.theta, spec.nu.indices()[ia], m, n, spec.R);
        }
        total += std::norm(inner);
    }
    return total;
}

double eval_Cb(const TrilinearSpec& spec, u64 b)
{
    double total = 0.0;
    for (i64 m : spec.alpha.indices()) {
        if (std::gcd(static_cast<u64>(m), b) != 1)
            continue;
        cd inner = 0.0;
        for (std::size_t in = 0; in < spec.beta.size(); ++in) {
            const u64 n = static_cast<u64>(spec.beta.indices()[in]);
            if (!is_squarefree(n) || std::gcd(static_cast<u64>(m) * b, n) != 1)
                continue;
            for (std::size_t ia = 0; ia < spec.nu.size(); ++ia)
                inner += spec.beta.values()[in] * spec.nu.values()[ia] *
                         kloosterman_phase(spec.theta, spec.nu.indices()[ia], m, n, b);
        }
        total += std::norm(inner);
    }
    return total;
}

} // namespace klab::reference
