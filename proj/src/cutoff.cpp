#include "klab/dispersion.hpp"

#include "klab/errors.hpp"
#include "klab/kahan.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <stdexcept>

namespace klab {

struct SmoothCutoff::Cache {
    std::shared_mutex mu;
    std::map<long double, std::complex<long double>> values;
};

namespace {

constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;

// s(t) = f(t) / (f(t) + f(1-t)), f(t) = exp(-1/t)
long double blend(long double t)
{
    if (t <= 0.0L)
        return 0.0L;
    if (t >= 1.0L)
        return 1.0L;
    const long double x = 1.0L / t - 1.0L / (1.0L - t);
    if (x > 11000.0L)
        return 0.0L;
    return 1.0L / (1.0L + std::exp(x));
}

// integral_a^b e(-x xi) dx
std::complex<long double> plateau_transform(long double a, long double b, long double xi)
{
    const long double len = b - a;
    if (xi == 0.0L)
        return {len, 0.0L};
    const long double mid = 0.5L * (a + b);
    const long double arg = std::numbers::pi_v<long double> * xi * len;
    const long double sinc_len = std::sin(arg) / (std::numbers::pi_v<long double> * xi);
    return std::polar(sinc_len, -two_pi * mid * xi);
}

} // namespace

SmoothCutoff::SmoothCutoff(double support_lo, double plateau_lo, double plateau_hi, double support_hi,
                           double quadrature_tolerance)
    : support_lo_(support_lo), plateau_lo_(plateau_lo), plateau_hi_(plateau_hi), support_hi_(support_hi),
      tolerance_(quadrature_tolerance), zero_(false), cache_(std::make_shared<Cache>())
{
    if (!(support_lo < plateau_lo && plateau_lo <= plateau_hi && plateau_hi < support_hi))
        throw std::invalid_argument(fmt::format("cutoff needs support_lo < plateau_lo <= plateau_hi < support_hi, got "
                                                "[{}, {}, {}, {}]",
                                                support_lo, plateau_lo, plateau_hi, support_hi));
    if (!(quadrature_tolerance > 0))
        throw std::invalid_argument("quadrature tolerance must be positive");
}

SmoothCutoff SmoothCutoff::standard() { return SmoothCutoff(0.5, 1.0, 2.0, 2.5); }

SmoothCutoff SmoothCutoff::zero()
{
    SmoothCutoff z;
    z.cache_ = std::make_shared<Cache>();
    return z;
}

long double SmoothCutoff::value(long double x) const
{
    if (zero_ || x <= support_lo_ || x >= support_hi_)
        return 0.0L;
    if (x < plateau_lo_)
        return blend((x - support_lo_) / (static_cast<long double>(plateau_lo_) - support_lo_));
    if (x > plateau_hi_)
        return blend((static_cast<long double>(support_hi_) - x) / (static_cast<long double>(support_hi_) - plateau_hi_));
    return 1.0L;
}

std::complex<long double> SmoothCutoff::fourier(long double xi) const
{
    if (zero_)
        return {0.0L, 0.0L};
    {
        std::shared_lock lock(cache_->mu);
        auto it = cache_->values.find(xi);
        if (it != cache_->values.end())
            return it->second;
    }
    const auto v = compute_fourier(xi);
    std::unique_lock lock(cache_->mu);
    cache_->values.emplace(xi, v);
    return v;
}

std::complex<long double> SmoothCutoff::compute_fourier(long double xi) const
{
    using boost::math::quadrature::gauss_kronrod;
    const long double w_up = static_cast<long double>(plateau_lo_) - support_lo_;
    const long double w_down = static_cast<long double>(support_hi_) - plateau_hi_;
    if (std::abs(xi) * std::min(w_up, w_down) > negligible_oscillations)
        return {0.0L, 0.0L};

    KahanSum<long double> re, im;
    long double err = 0, l1 = 0;
    auto ramp = [&](long double a, long double b) {
        const long double width = b - a;
        const auto panels = static_cast<long>(std::max(16.0L, std::ceil(2.0L * std::abs(xi) * width)));
        const long double h = width / static_cast<long double>(panels);
        for (long k = 0; k < panels; ++k) {
            const long double lo = a + h * static_cast<long double>(k);
            const long double hi = k + 1 == panels ? b : lo + h;
            long double e_re = 0, e_im = 0, l_re = 0;
            // each panel spans at most half an oscillation, so one 61-point rule suffices
            re.add(gauss_kronrod<long double, 61>::integrate(
                [&](long double x) { return value(x) * std::cos(two_pi * x * xi); }, lo, hi, 0, 0.0L, &e_re, &l_re));
            im.add(-gauss_kronrod<long double, 61>::integrate(
                [&](long double x) { return value(x) * std::sin(two_pi * x * xi); }, lo, hi, 0, 0.0L, &e_im));
            err += (e_re + e_im) * (hi - lo) / 2;
            l1 += l_re;
        }
    };
    ramp(support_lo_, plateau_lo_);
    ramp(plateau_hi_, support_hi_);
    if (err > tolerance_ * std::max(1.0L, l1))
        throw QuadratureFailure(
            fmt::format("cutoff transform at xi={} has error estimate {}", static_cast<double>(xi), static_cast<double>(err)));
    return plateau_transform(plateau_lo_, plateau_hi_, xi) + std::complex<long double>(re.value(), im.value());
}

} // namespace klab
