#include "klab/sequences.hpp"

#include "klab/errors.hpp"
#include "klab/kahan.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace klab {

std::string to_string(RangeConvention c)
{
    return c == RangeConvention::half_open ? "half_open" : "closed";
}

RangeConvention parse_range_convention(std::string_view s)
{
    if (s == "half_open")
        return RangeConvention::half_open;
    if (s == "closed")
        return RangeConvention::closed;
    throw std::invalid_argument(fmt::format("unknown range convention '{}'", s));
}

DyadicRange::DyadicRange(i64 base, RangeConvention convention) : base_(base), convention_(convention)
{
    if (base < 1)
        throw std::invalid_argument(fmt::format("dyadic base must be positive, got {}", base));
}

std::vector<i64> DyadicRange::indices() const
{
    std::vector<i64> out(size());
    std::iota(out.begin(), out.end(), first());
    return out;
}

Support::Support(DyadicRange r) : indices_(r.indices()), range_(r) {}

Support Support::of(std::vector<i64> indices)
{
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
        throw std::invalid_argument("support indices must be distinct");
    if (!indices.empty() && indices.front() < 1)
        throw std::invalid_argument("support indices must be positive");
    Support s;
    s.indices_ = std::move(indices);
    return s;
}

i64 Support::scale() const noexcept
{
    if (range_)
        return range_->base();
    return indices_.empty() ? 0 : indices_.back();
}

CoefficientSequence::CoefficientSequence(Support support, std::vector<cd> values,
                                         std::optional<unsigned> divisor_bound_k)
    : support_(std::move(support)), values_(std::move(values))
{
    if (values_.size() != support_.size())
        throw std::invalid_argument("sequence values must align with the support");
    KahanSum<double> l1, l2sq;
    for (const cd& v : values_) {
        l1.add(std::abs(v));
        l2sq.add(std::norm(v));
    }
    l1_ = l1.value();
    l2_ = std::sqrt(l2sq.value());
    if (divisor_bound_k)
        *this = with_divisor_bound(*divisor_bound_k);
}

cd CoefficientSequence::at(i64 n) const
{
    const auto& idx = support_.indices();
    auto it = std::lower_bound(idx.begin(), idx.end(), n);
    if (it == idx.end() || *it != n)
        return {0.0, 0.0};
    return values_[static_cast<std::size_t>(it - idx.begin())];
}

CoefficientSequence CoefficientSequence::with_divisor_bound(unsigned k) const
{
    const auto& idx = support_.indices();
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const double bound = static_cast<double>(tau_k(static_cast<u64>(idx[i]), k));
        if (std::abs(values_[i]) > bound * (1.0 + 1e-12))
            throw DivisorBoundViolated(fmt::format("|value({})| = {} exceeds tau_{}({}) = {}", idx[i],
                                                   std::abs(values_[i]), k, idx[i], bound));
    }
    CoefficientSequence out = *this;
    out.divisor_bound_k_ = k;
    return out;
}

bool CoefficientSequence::is_real() const noexcept
{
    return std::all_of(values_.begin(), values_.end(), [](const cd& v) { return v.imag() == 0.0; });
}

namespace {

struct Builder {
    const Support& support;

    CoefficientSequence operator()(const kind::Ones&) const
    {
        return {support, std::vector<cd>(support.size(), cd{1.0, 0.0}), 1u};
    }

    CoefficientSequence operator()(const kind::Moebius&) const
    {
        std::vector<cd> v;
        v.reserve(support.size());
        for (i64 n : support.indices())
            v.emplace_back(static_cast<double>(mobius(static_cast<u64>(n))), 0.0);
        return {support, std::move(v), 1u};
    }

    CoefficientSequence operator()(const kind::TauK& t) const
    {
        if (t.k == 0)
            throw std::invalid_argument("tau_k sequence needs k >= 1");
        std::vector<cd> v;
        v.reserve(support.size());
        for (i64 n : support.indices())
            v.emplace_back(static_cast<double>(tau_k(static_cast<u64>(n), t.k)), 0.0);
        return {support, std::move(v), t.k};
    }

    CoefficientSequence operator()(const kind::RandomUnit& r) const
    {
        std::mt19937_64 gen(r.seed);
        const double scale = 1.0 / std::sqrt(static_cast<double>(support.size()));
        std::vector<cd> v;
        v.reserve(support.size());
        for (std::size_t i = 0; i < support.size(); ++i) {
            const double u = static_cast<double>(gen() >> 11) * 0x1p-53;
            v.push_back(std::polar(scale, 2.0 * std::numbers::pi * u));
        }
        return {support, std::move(v)};
    }

    CoefficientSequence operator()(const kind::Explicit& e) const
    {
        std::vector<cd> v(support.size(), cd{0.0, 0.0});
        std::vector<bool> seen(support.size(), false);
        const auto& idx = support.indices();
        for (const auto& [n, value] : e.entries) {
            auto it = std::lower_bound(idx.begin(), idx.end(), n);
            if (it == idx.end() || *it != n)
                throw std::invalid_argument(fmt::format("explicit index {} lies outside the support", n));
            const auto pos = static_cast<std::size_t>(it - idx.begin());
            if (seen[pos])
                throw std::invalid_argument(fmt::format("explicit index {} listed twice", n));
            seen[pos] = true;
            v[pos] = value;
        }
        return {support, std::move(v)};
    }
};

} // namespace

CoefficientSequence build_sequence(const SequenceKind& kind, const Support& support)
{
    if (support.empty())
        throw EmptySupport("cannot build a sequence on an empty support");
    return std::visit(Builder{support}, kind);
}

SequenceNorms sequence_norms(const CoefficientSequence& s)
{
    SequenceNorms out;
    KahanSum<double> l1, l2sq;
    for (const cd& v : s.values()) {
        l1.add(std::abs(v));
        l2sq.add(std::norm(v));
    }
    out.l1 = l1.value();
    out.l2 = std::sqrt(l2sq.value());
    if (s.divisor_bound_k()) {
        const double M = static_cast<double>(s.support().scale());
        const double k = *s.divisor_bound_k();
        out.shiu_ceiling = std::sqrt(M) * std::pow(std::log(2.0 * M), k * k - 1.0);
    }
    return out;
}

double sw_discrepancy(const CoefficientSequence& beta, u64 q, i64 a, u64 r)
{
    if (q == 0 || r == 0)
        throw std::invalid_argument("sw_discrepancy: q and r must be positive");
    const u64 ar = reduce(a, q);
    if (std::gcd(ar, q) != 1)
        throw NotCoprime(fmt::format("gcd({}, {}) > 1", a, q));
    const u64 qr = checked_mul(q, r);
    KahanSum<cd> progression, coprime;
    const auto idx = beta.indices();
    const auto val = beta.values();
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const u64 n = static_cast<u64>(idx[i]);
        if (n % q == ar && std::gcd(n, r) == 1)
            progression.add(val[i]);
        if (std::gcd(n, qr) == 1)
            coprime.add(val[i]);
    }
    return std::abs(progression.value() - coprime.value() / static_cast<double>(euler_phi(q)));
}

std::vector<SwRow> sw_table(const CoefficientSequence& beta, u64 q_max, u64 r)
{
    std::vector<SwRow> rows;
    for (u64 q = 1; q <= q_max; ++q)
        for (u64 a = 0; a < q; ++a)
            if (std::gcd(a, q) == 1)
                rows.push_back({q, static_cast<i64>(a), r, sw_discrepancy(beta, q, static_cast<i64>(a), r)});
    return rows;
}

void write_sequence(std::ostream& os, const CoefficientSequence& s)
{
    if (const auto& range = s.support().range())
        os << fmt::format("# support {} {}\n", range->base(), to_string(range->convention()));
    else
        os << "# support explicit\n";
    const auto idx = s.indices();
    const auto val = s.values();
    for (std::size_t i = 0; i < idx.size(); ++i)
        os << fmt::format("{} {:.17g} {:.17g}\n", idx[i], val[i].real(), val[i].imag());
}

CoefficientSequence read_sequence(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("sequence table: missing header");
    std::istringstream header(line);
    std::string hash, word, base_text;
    header >> hash >> word >> base_text;
    if (hash != "#" || word != "support" || base_text.empty())
        throw std::invalid_argument(fmt::format("sequence table: bad header '{}'", line));

    std::vector<std::pair<i64, cd>> entries;
    while (std::getline(is, line)) {
        if (line.empty() || line.front() == '#')
            continue;
        std::istringstream row(line);
        i64 n;
        double re, im;
        if (!(row >> n >> re >> im))
            throw std::invalid_argument(fmt::format("sequence table: bad row '{}'", line));
        entries.emplace_back(n, cd{re, im});
    }

    if (base_text == "explicit") {
        std::vector<i64> idx;
        idx.reserve(entries.size());
        for (const auto& e : entries)
            idx.push_back(e.first);
        return build_sequence(kind::Explicit{std::move(entries)}, Support::of(std::move(idx)));
    }
    std::string conv = "half_open";
    header >> conv;
    const DyadicRange range(std::stoll(base_text), parse_range_convention(conv));
    return build_sequence(kind::Explicit{std::move(entries)}, Support(range));
}

} // namespace klab
