#pragma once

// Exact rationals for exponent-of-X arithmetic. Always in lowest terms with a
// positive denominator; intermediate products use 128 bits and overflow throws.

#include "klab/arith.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <string_view>

namespace klab {

class Rational
{
public:
    constexpr Rational() = default;
    Rational(std::int64_t n) : num_(n) {} // NOLINT: implicit from integers is intended
    Rational(std::int64_t n, std::int64_t d);

    /// Parses "p/q", "p" or "-p/q". Throws std::invalid_argument.
    static Rational parse(std::string_view text);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const;

    Rational operator-() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    static Rational from_wide(i128 n, i128 d);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

using RationalExponent = Rational;

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);
std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Product of named variables raised to rational powers, e.g. M^{1/2} Q^{15/16}.
/// Zero exponents are dropped so equality is structural.
class Monomial
{
public:
    Monomial() = default;
    Monomial(std::initializer_list<std::pair<const std::string, Rational>> exps);

    static Monomial var(const std::string& name, Rational power = 1);

    Rational exponent(const std::string& name) const;
    const std::map<std::string, Rational>& exponents() const noexcept { return exps_; }

    Monomial pow(const Rational& p) const;
    friend Monomial operator*(const Monomial& a, const Monomial& b);
    friend Monomial operator/(const Monomial& a, const Monomial& b);
    friend bool operator==(const Monomial&, const Monomial&) = default;

    /// Evaluates with the given variable values (missing variables are 1).
    double evaluate(const std::map<std::string, double>& values) const;

    std::string str() const;

private:
    void prune();

    std::map<std::string, Rational> exps_;
};

std::ostream& operator<<(std::ostream& os, const Monomial& m);

} // namespace klab
