#pragma once

// Scalar special functions and branch-controlled complex powers.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace modcup {

using cplx = std::complex<double>;

namespace special {

/// Half-open interval of length 2*pi used to pick the argument of a complex
/// number. Exactly one endpoint belongs to the range.
struct ArgRange {
    double lower;
    double upper;
    bool upper_closed; // true: (lower, upper], false: [lower, upper)

    /// (-pi, pi]: arguments of cz+d for z in the upper half-plane.
    static constexpr ArgRange principal() { return {-std::numbers::pi, std::numbers::pi, true}; }
    /// [-pi, pi): arguments of ct+d for t in the lower half-plane.
    static constexpr ArgRange lower_closed() { return {-std::numbers::pi, std::numbers::pi, false}; }
    /// (-pi/2, 3pi/2): arguments of z-t in the Eichler integrand.
    static constexpr ArgRange eichler()
    {
        return {-std::numbers::pi / 2, 3 * std::numbers::pi / 2, true};
    }
};

/// Argument of z (z != 0) inside `range`.
double arg_in(cplx z, const ArgRange& range);

/// exp(s * (log|z| + i*arg)) with arg taken in `range`.
/// z == 0 returns 0 for s > 0 and throws DomainError otherwise.
cplx cpow(cplx z, double s, const ArgRange& range = ArgRange::principal());

/// Gamma function on the real line; PoleError at non-positive integers.
double gamma_real(double x);

/// Rising factorial r (r+1) ... (r+n-1), evaluated left to right.
double pochhammer(double r, int n);

/// Euler beta function for a, b > 0.
double beta(double a, double b);

/// sin(x)/x, continued by 1 at the origin.
double sinc(double x);

/// Divisor power sum sum_{d | n} d^k, exact. Throws DomainError for n < 1 and
/// on 64-bit overflow.
std::uint64_t sigma_div(int k, std::int64_t n);

/// Generalized binomial coefficient r (r-1) ... (r-m+1) / m!.
double binom_real(double r, int m);

/// Neumaier-compensated running sum of real values.
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x)
    {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Componentwise compensated sum of complex values.
class CompensatedComplexSum {
public:
    CompensatedComplexSum& operator+=(cplx x)
    {
        re_.add(x.real());
        im_.add(x.imag());
        return *this;
    }
    cplx value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_;
    CompensatedSum im_;
};

} // namespace special
} // namespace modcup
