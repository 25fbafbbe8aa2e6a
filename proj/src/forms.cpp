#include "klab/forms.hpp"

#include "klab/errors.hpp"
#include "klab/kahan.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace klab {

void TrilinearSpec::validate() const
{
    if (theta == 0)
        throw std::invalid_argument("theta must be a nonzero integer");
    if (R == 0)
        throw std::invalid_argument("R must be positive");
}

namespace detail {

std::complex<double> phase_sum(std::span<const i64> a_idx, std::span<const cd> a_val, u64 step, u64 d)
{
    KahanSum<cd> acc;
    for (std::size_t i = 0; i < a_idx.size(); ++i) {
        const u64 x = mulmod(reduce(a_idx[i], d), step, d);
        acc.add(a_val[i] * unit_phase(x, d));
    }
    return acc.value();
}

} // namespace detail

namespace {

struct Compressed {
    std::vector<i64> idx;
    std::vector<cd> val;
};

Compressed nonzero(const CoefficientSequence& s)
{
    Compressed c;
    const auto idx = s.indices();
    const auto val = s.values();
    for (std::size_t i = 0; i < idx.size(); ++i)
        if (val[i] != cd{0.0, 0.0}) {
            c.idx.push_back(idx[i]);
            c.val.push_back(val[i]);
        }
    return c;
}

// All denominators n*R must fit; checked before entering a parallel region.
void check_denominators(const CoefficientSequence& s, u64 factor)
{
    if (s.size() == 0)
        return;
    checked_mul(static_cast<u64>(s.indices().back()), factor);
}

} // namespace

FormResult eval_trilinear_B(const TrilinearSpec& spec)
{
    spec.validate();
    const auto start = std::chrono::steady_clock::now();
    check_denominators(spec.beta, spec.R);

    const Compressed ms = nonzero(spec.alpha);
    const Compressed as = nonzero(spec.nu);
    const auto n_idx = spec.beta.indices();
    const auto n_val = spec.beta.values();
    const auto rows = static_cast<std::ptrdiff_t>(n_idx.size());

    std::vector<cd> part(n_idx.size());
    std::vector<std::uint64_t> count(n_idx.size(), 0);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t j = 0; j < rows; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        if (n_val[jj] == cd{0.0, 0.0} || as.idx.empty())
            continue;
        const u64 d = static_cast<u64>(n_idx[jj]) * spec.R;

        std::vector<i64> coprime_m;
        std::vector<cd> coprime_alpha;
        for (std::size_t i = 0; i < ms.idx.size(); ++i)
            if (std::gcd(static_cast<u64>(ms.idx[i]), d) == 1) {
                coprime_m.push_back(ms.idx[i]);
                coprime_alpha.push_back(ms.val[i]);
            }
        if (coprime_m.empty())
            continue;
        const auto inverses = batch_mod_inverse(coprime_m, d);
        const u64 theta_d = reduce(spec.theta, d);

        KahanSum<cd> row;
        for (std::size_t i = 0; i < coprime_m.size(); ++i) {
            const u64 step = mulmod(theta_d, inverses[i].value, d);
            row.add(coprime_alpha[i] * detail::phase_sum(as.idx, as.val, step, d));
        }
        part[jj] = n_val[jj] * row.value();
        count[jj] = coprime_m.size() * as.idx.size();
    }

    FormResult out;
    out.value = ordered_sum<cd>(part);
    out.terms = std::accumulate(count.begin(), count.end(), std::uint64_t{0});
    out.elapsed = std::chrono::steady_clock::now() - start;
    return out;
}

double eval_C1R_direct(const TrilinearSpec& spec)
{
    spec.validate();
    check_denominators(spec.beta, spec.R);

    const Compressed ns = nonzero(spec.beta);
    const Compressed as = nonzero(spec.nu);
    const auto m_idx = spec.alpha.indices();
    const auto rows = static_cast<std::ptrdiff_t>(m_idx.size());
    std::vector<double> part(m_idx.size(), 0.0);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        const u64 m = static_cast<u64>(m_idx[ii]);
        if (std::gcd(m, spec.R) != 1)
            continue;
        KahanSum<cd> inner;
        for (std::size_t j = 0; j < ns.idx.size(); ++j) {
            const u64 n = static_cast<u64>(ns.idx[j]);
            if (std::gcd(m, n) != 1)
                continue;
            const u64 d = n * spec.R;
            const u64 step = mulmod(reduce(spec.theta, d), mod_inverse(static_cast<i64>(m), d).value, d);
            inner.add(ns.val[j] * detail::phase_sum(as.idx, as.val, step, d));
        }
        part[ii] = std::norm(inner.value());
    }
    return ordered_sum<double>(part);
}

ComplementarySplit complementary_split(u64 n, u64 R)
{
    if (n == 0 || R == 0)
        throw std::invalid_argument("complementary_split: n and R must be positive");
    const SqfSplit s = squarefree_squarefull_split(n);
    const u64 r = std::gcd(s.squarefree_part, R);
    return {s.squarefree_part / r, s.squarefull_part, r};
}

namespace {

struct Group {
    u64 b;
    u64 r;
    std::vector<std::size_t> members; // positions into the beta support
};

std::vector<Group> group_support(const CoefficientSequence& beta, u64 R)
{
    const auto idx = beta.indices();
    std::map<std::pair<u64, u64>, std::vector<std::size_t>> by_class;
    std::vector<ComplementarySplit> splits(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const u64 n = static_cast<u64>(idx[i]);
        const ComplementarySplit s = complementary_split(n, R);
        splits[i] = s;
        const bool ok = s.core * s.squarefull * s.r == n && is_squarefree(s.core) && is_squarefull(s.squarefull) &&
                        is_squarefree(s.r) && R % s.r == 0 && std::gcd(s.core, s.squarefull * R) == 1;
        if (!ok)
            throw DecompositionMismatch(fmt::format("split of {} = {} * {} * {} violates the class constraints", n,
                                                    s.core, s.squarefull, s.r));
        by_class[{s.squarefull, s.r}].push_back(i);
    }

    std::vector<Group> groups;
    std::vector<int> hits(idx.size(), 0);
    for (auto& [key, members] : by_class) {
        for (std::size_t i : members) {
            ++hits[i];
            const auto& s = splits[i];
            if (s.squarefull != key.first || s.r != key.second)
                throw DecompositionMismatch(fmt::format("index {} filed under the wrong class", idx[i]));
        }
        groups.push_back({key.first, key.second, std::move(members)});
    }
    for (std::size_t i = 0; i < idx.size(); ++i)
        if (hits[i] != 1)
            throw DecompositionMismatch(fmt::format("index {} reassembled {} times", idx[i], hits[i]));
    return groups;
}

} // namespace

DecomposedC1R decompose_C1R(const TrilinearSpec& spec)
{
    spec.validate();
    check_denominators(spec.beta, spec.R);

    const auto groups = group_support(spec.beta, spec.R);
    const auto n_idx = spec.beta.indices();
    const auto n_val = spec.beta.values();
    const Compressed as = nonzero(spec.nu);
    const auto m_idx = spec.alpha.indices();
    const auto rows = static_cast<std::ptrdiff_t>(m_idx.size());
    const std::size_t G = groups.size();

    std::vector<double> part(m_idx.size(), 0.0);
    std::vector<double> piece_part(m_idx.size() * G, 0.0);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        const u64 m = static_cast<u64>(m_idx[ii]);
        if (std::gcd(m, spec.R) != 1)
            continue;
        KahanSum<cd> total;
        for (std::size_t g = 0; g < G; ++g) {
            const Group& grp = groups[g];
            if (std::gcd(m, grp.b) != 1)
                continue;
            KahanSum<cd> z;
            for (std::size_t pos : grp.members) {
                if (n_val[pos] == cd{0.0, 0.0})
                    continue;
                const u64 core = static_cast<u64>(n_idx[pos]) / (grp.b * grp.r);
                if (std::gcd(m, core) != 1)
                    continue;
                const u64 d = core * grp.b * grp.r * spec.R;
                const u64 step = mulmod(reduce(spec.theta, d), mod_inverse(static_cast<i64>(m), d).value, d);
                z.add(n_val[pos] * detail::phase_sum(as.idx, as.val, step, d));
            }
            const cd zv = z.value();
            total.add(zv);
            piece_part[ii * G + g] = std::norm(zv);
        }
        part[ii] = std::norm(total.value());
    }

    DecomposedC1R out;
    out.value = ordered_sum<double>(part);
    for (std::size_t g = 0; g < G; ++g) {
        KahanSum<double> ms;
        for (std::size_t i = 0; i < m_idx.size(); ++i)
            ms.add(piece_part[i * G + g]);
        out.pieces.push_back({groups[g].b, groups[g].r, groups[g].members.size(), ms.value()});
        if (std::gcd(groups[g].b, spec.R) != 1)
            out.r_sharing_squarefull += groups[g].members.size();
    }
    return out;
}

double eval_Cb(const TrilinearSpec& spec, u64 b)
{
    if (spec.theta == 0)
        throw std::invalid_argument("theta must be a nonzero integer");
    if (b == 0)
        throw std::invalid_argument("b must be positive");
    check_denominators(spec.beta, b);

    const Compressed as = nonzero(spec.nu);
    Compressed ns;
    {
        const Compressed all = nonzero(spec.beta);
        for (std::size_t j = 0; j < all.idx.size(); ++j) {
            const u64 n = static_cast<u64>(all.idx[j]);
            if (std::gcd(n, b) == 1 && is_squarefree(n)) {
                ns.idx.push_back(all.idx[j]);
                ns.val.push_back(all.val[j]);
            }
        }
    }
    const auto m_idx = spec.alpha.indices();
    const auto rows = static_cast<std::ptrdiff_t>(m_idx.size());
    std::vector<double> part(m_idx.size(), 0.0);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        const u64 m = static_cast<u64>(m_idx[ii]);
        if (std::gcd(m, b) != 1)
            continue;
        KahanSum<cd> inner;
        for (std::size_t j = 0; j < ns.idx.size(); ++j) {
            const u64 n = static_cast<u64>(ns.idx[j]);
            if (std::gcd(m, n) != 1)
                continue;
            const u64 d = n * b;
            const u64 step = mulmod(reduce(spec.theta, d), mod_inverse(static_cast<i64>(m), d).value, d);
            inner.add(ns.val[j] * detail::phase_sum(as.idx, as.val, step, d));
        }
        part[ii] = std::norm(inner.value());
    }
    return ordered_sum<double>(part);
}

} // namespace klab
