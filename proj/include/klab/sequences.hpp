#pragma once

// Coefficient sequences (alpha_m), (beta_n), (nu_a) on finite integer supports,
// their norms, and a finite-scale Siegel-Walfisz discrepancy table.

#include "klab/arith.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace klab {

using cd = std::complex<double>;

enum class RangeConvention { half_open, closed };

std::string to_string(RangeConvention c);
RangeConvention parse_range_convention(std::string_view s);

/// (T, 2T] or [T, 2T], written "m ~ M" in the analytic literature.
class DyadicRange
{
public:
    explicit DyadicRange(i64 base, RangeConvention convention = RangeConvention::half_open);

    i64 base() const noexcept { return base_; }
    RangeConvention convention() const noexcept { return convention_; }
    i64 first() const noexcept { return convention_ == RangeConvention::half_open ? base_ + 1 : base_; }
    i64 last() const noexcept { return 2 * base_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(last() - first() + 1); }
    bool contains(i64 x) const noexcept { return x >= first() && x <= last(); }
    std::vector<i64> indices() const;

    bool operator==(const DyadicRange&) const = default;

private:
    i64 base_;
    RangeConvention convention_;
};

/// Sorted set of distinct positive indices; remembers the dyadic range it came from.
class Support
{
public:
    Support(DyadicRange r); // NOLINT: a range is a support
    static Support of(std::vector<i64> indices);

    const std::vector<i64>& indices() const noexcept { return indices_; }
    const std::optional<DyadicRange>& range() const noexcept { return range_; }
    std::size_t size() const noexcept { return indices_.size(); }
    bool empty() const noexcept { return indices_.empty(); }

    /// Dyadic base T, or the largest index for explicit sets.
    i64 scale() const noexcept;

private:
    Support() = default;

    std::vector<i64> indices_;
    std::optional<DyadicRange> range_;
};

namespace kind {
struct Ones {};
struct Moebius {};
struct TauK {
    unsigned k = 2;
};
// i.i.d. phases e(u_i), u_i = (mt19937_64 output >> 11) * 2^-53, in index order,
// then scaled so the whole sequence has l2 norm 1.
struct RandomUnit {
    std::uint64_t seed = 0;
};
struct Explicit {
    std::vector<std::pair<i64, cd>> entries; // unlisted support points are 0
};
} // namespace kind

using SequenceKind = std::variant<kind::Ones, kind::Moebius, kind::TauK, kind::RandomUnit, kind::Explicit>;

/// Immutable complex sequence aligned with its support, norms cached.
class CoefficientSequence
{
public:
    CoefficientSequence(Support support, std::vector<cd> values, std::optional<unsigned> divisor_bound_k = {});

    const Support& support() const noexcept { return support_; }
    std::span<const i64> indices() const noexcept { return support_.indices(); }
    std::span<const cd> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    /// Value at index n, 0 outside the support.
    cd at(i64 n) const;

    double l1() const noexcept { return l1_; }
    double l2() const noexcept { return l2_; }
    const std::optional<unsigned>& divisor_bound_k() const noexcept { return divisor_bound_k_; }

    /// Copy tagged as tau_k-bounded. Throws DivisorBoundViolated if some |value(n)| > tau_k(n).
    CoefficientSequence with_divisor_bound(unsigned k) const;

    bool is_real() const noexcept;

private:
    Support support_;
    std::vector<cd> values_;
    double l1_ = 0;
    double l2_ = 0;
    std::optional<unsigned> divisor_bound_k_;
};

/// Throws EmptySupport for an empty support.
CoefficientSequence build_sequence(const SequenceKind& kind, const Support& support);

struct SequenceNorms {
    double l1 = 0;
    double l2 = 0;
    // M^{1/2} (log 2M)^{k^2-1} with M the support scale, only for tau_k-bounded sequences.
    std::optional<double> shiu_ceiling;
};

SequenceNorms sequence_norms(const CoefficientSequence& s);

/// |sum_{n = a (q), (n,r)=1} beta_n - (1/phi(q)) sum_{(n,qr)=1} beta_n| over the support.
/// Throws NotCoprime when gcd(a, q) > 1.
double sw_discrepancy(const CoefficientSequence& beta, u64 q, i64 a, u64 r);

struct SwRow {
    u64 q;
    i64 a;
    u64 r;
    double discrepancy;
};

/// Discrepancy for every q <= q_max and every reduced class a mod q.
std::vector<SwRow> sw_table(const CoefficientSequence& beta, u64 q_max, u64 r = 1);

/// Text table: "# support T convention" (or "# support explicit"), then
/// "index value_re value_im" per support point, 17 significant digits.
void write_sequence(std::ostream& os, const CoefficientSequence& s);
CoefficientSequence read_sequence(std::istream& is);

} // namespace klab
