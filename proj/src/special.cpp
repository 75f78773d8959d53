#include "modcup/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "modcup/error.hpp"

namespace modcup::special {

namespace {

constexpr double two_pi = 2 * std::numbers::pi;

std::uint64_t checked_pow(std::uint64_t d, int k)
{
    std::uint64_t out = 1;
    for (int i = 0; i < k; ++i) {
        if (__builtin_mul_overflow(out, d, &out))
            throw DomainError("sigma_div: d^k overflows 64 bits");
    }
    return out;
}

} // namespace

double arg_in(cplx z, const ArgRange& range)
{
    double theta = std::atan2(z.imag(), z.real());
    while (theta < range.lower)
        theta += two_pi;
    while (theta > range.upper)
        theta -= two_pi;
    // atan2 may land exactly on the excluded endpoint
    if (range.upper_closed && theta == range.lower)
        theta += two_pi;
    else if (!range.upper_closed && theta == range.upper)
        theta -= two_pi;
    return theta;
}

cplx cpow(cplx z, double s, const ArgRange& range)
{
    if (z == cplx(0.0, 0.0)) {
        if (s > 0)
            return {0.0, 0.0};
        throw DomainError("cpow: zero base with non-positive exponent");
    }
    const double theta = arg_in(z, range);
    return std::exp(cplx(s * std::log(std::abs(z)), s * theta));
}

double gamma_real(double x)
{
    if (x <= 0 && x == std::floor(x))
        throw PoleError("gamma_real: pole at " + std::to_string(x));
    return std::tgamma(x);
}

double pochhammer(double r, int n)
{
    double out = 1.0;
    for (int k = 0; k < n; ++k)
        out *= r + k;
    return out;
}

double beta(double a, double b)
{
    if (!(a > 0) || !(b > 0))
        throw DomainError("beta: arguments must be positive");
    if (a + b < 150)
        return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double sinc(double x)
{
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

std::uint64_t sigma_div(int k, std::int64_t n)
{
    if (n < 1)
        throw DomainError("sigma_div: n must be positive");
    if (k < 0)
        throw DomainError("sigma_div: k must be non-negative");
    std::uint64_t sum = 0;
    const auto un = static_cast<std::uint64_t>(n);
    for (std::uint64_t d = 1; d * d <= un; ++d) {
        if (un % d != 0)
            continue;
        const std::uint64_t e = un / d;
        std::uint64_t term = checked_pow(d, k);
        if (e != d) {
            if (__builtin_add_overflow(term, checked_pow(e, k), &term))
                throw DomainError("sigma_div: sum overflows 64 bits");
        }
        if (__builtin_add_overflow(sum, term, &sum))
            throw DomainError("sigma_div: sum overflows 64 bits");
    }
    return sum;
}

double binom_real(double r, int m)
{
    double out = 1.0;
    for (int j = 0; j < m; ++j)
        out *= (r - j) / (j + 1);
    return out;
}

} // namespace modcup::special
