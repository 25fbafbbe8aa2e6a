#include "klab/rational.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace klab {

namespace {

i128 wide_gcd(i128 a, i128 b)
{
    if (a < 0)
        a = -a;
    if (b < 0)
        b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t parse_int(std::string_view s, std::string_view whole)
{
    std::int64_t v = 0;
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument(fmt::format("not a rational: '{}'", whole));
    return v;
}

} // namespace

Rational::Rational(std::int64_t n, std::int64_t d)
{
    *this = from_wide(n, d);
}

Rational Rational::from_wide(i128 n, i128 d)
{
    if (d == 0)
        throw std::domain_error("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const i128 g = wide_gcd(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    constexpr i128 lo = std::numeric_limits<std::int64_t>::min();
    constexpr i128 hi = std::numeric_limits<std::int64_t>::max();
    if (n < lo || n > hi || d > hi)
        throw std::overflow_error("rational overflows 64-bit numerator/denominator");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
}

Rational Rational::parse(std::string_view text)
{
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
            s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
            s.remove_suffix(1);
        return s;
    };
    const std::string_view t = trim(text);
    const auto slash = t.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_int(t, text));
    const std::int64_t n = parse_int(trim(t.substr(0, slash)), text);
    const std::int64_t d = parse_int(trim(t.substr(slash + 1)), text);
    if (d == 0)
        throw std::invalid_argument(fmt::format("zero denominator in '{}'", text));
    return Rational(n, d);
}

std::string Rational::str() const
{
    if (den_ == 1)
        return std::to_string(num_);
    return fmt::format("{}/{}", num_, den_);
}

Rational Rational::operator-() const
{
    return from_wide(-static_cast<i128>(num_), den_);
}

Rational operator+(const Rational& a, const Rational& b)
{
    return Rational::from_wide(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                               static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b)
{
    return a + (-b);
}

Rational operator*(const Rational& a, const Rational& b)
{
    return Rational::from_wide(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b)
{
    if (b.num_ == 0)
        throw std::domain_error("rational division by zero");
    return Rational::from_wide(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b)
{
    const i128 l = static_cast<i128>(a.num_) * b.den_;
    const i128 r = static_cast<i128>(b.num_) * a.den_;
    if (l < r)
        return std::strong_ordering::less;
    if (l > r)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Monomial::Monomial(std::initializer_list<std::pair<const std::string, Rational>> exps) : exps_(exps)
{
    prune();
}

Monomial Monomial::var(const std::string& name, Rational power)
{
    Monomial m;
    m.exps_[name] = power;
    m.prune();
    return m;
}

Rational Monomial::exponent(const std::string& name) const
{
    auto it = exps_.find(name);
    return it == exps_.end() ? Rational(0) : it->second;
}

Monomial Monomial::pow(const Rational& p) const
{
    Monomial out;
    for (const auto& [k, e] : exps_)
        out.exps_[k] = e * p;
    out.prune();
    return out;
}

Monomial operator*(const Monomial& a, const Monomial& b)
{
    Monomial out = a;
    for (const auto& [k, e] : b.exps_)
        out.exps_[k] += e;
    out.prune();
    return out;
}

Monomial operator/(const Monomial& a, const Monomial& b)
{
    return a * b.pow(-1);
}

double Monomial::evaluate(const std::map<std::string, double>& values) const
{
    double v = 1.0;
    for (const auto& [k, e] : exps_) {
        auto it = values.find(k);
        if (it != values.end())
            v *= std::pow(it->second, e.to_double());
    }
    return v;
}

std::string Monomial::str() const
{
    if (exps_.empty())
        return "1";
    std::string s;
    for (const auto& [k, e] : exps_) {
        if (e == Rational(1))
            s += k;
        else
            s += fmt::format("{}^{{{}}}", k, e.str());
    }
    return s;
}

void Monomial::prune()
{
    std::erase_if(exps_, [](const auto& kv) { return kv.second == Rational(0); });
}

std::ostream& operator<<(std::ostream& os, const Monomial& m) { return os << m.str(); }

} // namespace klab
