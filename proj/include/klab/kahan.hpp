#pragma once

#include <cmath>
#include <complex>
#include <span>

namespace klab {

/// Neumaier-compensated running sum.
template <class T>
class KahanSum
{
public:
    void add(T x) noexcept
    {
        T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    KahanSum& operator+=(T x) noexcept
    {
        add(x);
        return *this;
    }

    T value() const noexcept { return sum_ + comp_; }

private:
    T sum_{};
    T comp_{};
};

template <class T>
class KahanSum<std::complex<T>>
{
public:
    void add(std::complex<T> z) noexcept
    {
        re_.add(z.real());
        im_.add(z.imag());
    }

    KahanSum& operator+=(std::complex<T> z) noexcept
    {
        add(z);
        return *this;
    }

    std::complex<T> value() const noexcept { return {re_.value(), im_.value()}; }

private:
    KahanSum<T> re_;
    KahanSum<T> im_;
};

// Compensated sum of a buffer in index order. Parallel kernels write per-row
// partials and reduce through this, so results do not depend on thread count.
template <class T>
T ordered_sum(std::span<const T> parts) noexcept
{
    KahanSum<T> acc;
    for (const T& x : parts)
        acc.add(x);
    return acc.value();
}

} // namespace klab
