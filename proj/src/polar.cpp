#include "modcup/polar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "modcup/error.hpp"

namespace modcup::polar {

namespace {

constexpr cplx I(0.0, 1.0);

// (r)_k / k!, with a flag when the Pochhammer factor vanishes.
struct RisingRatio {
    double value;
    bool vanishes;
};

std::vector<RisingRatio> rising_ratios(double r, int kmax)
{
    std::vector<RisingRatio> out(static_cast<std::size_t>(kmax) + 1);
    double g = 1.0;
    bool zero = false;
    out[0] = {1.0, false};
    for (int k = 1; k <= kmax; ++k) {
        const double factor = r + k - 1;
        if (factor == 0.0)
            zero = true;
        g *= factor / k;
        out[k] = {zero ? 0.0 : g, zero};
    }
    return out;
}

void require_minus(const PolarSeries& f, const char* who)
{
    if (!f.is_minus())
        throw ParameterError(std::string(who) + ": expected a minus-part series (powers <= 0)");
}

void require_plus(const PolarSeries& h, const char* who)
{
    if (!h.is_plus())
        throw ParameterError(std::string(who) + ": expected a plus-part series (powers >= 0)");
}

} // namespace

cplx disk_coordinate(cplx z) { return (z - I) / (z + I); }
cplx from_disk(cplx w) { return I * (1.0 + w) / (1.0 - w); }

PolarSeries::PolarSeries(int n_min, std::vector<cplx> coeffs) : n_min_(n_min), c_(std::move(coeffs))
{
    if (c_.empty())
        c_.push_back(0.0);
}

PolarSeries PolarSeries::monomial(int n, cplx c) { return PolarSeries(n, {c}); }

cplx PolarSeries::coeff(int n) const
{
    if (n < n_min_ || n > n_max())
        return 0.0;
    return c_[static_cast<std::size_t>(n - n_min_)];
}

cplx PolarSeries::evaluate(cplx w) const
{
    // Horner from the top power, then shift by w^{n_min}
    cplx acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = acc * w + *it;
    return acc * std::pow(w, n_min_);
}

PolarSeries PolarSeries::operator+(const PolarSeries& other) const
{
    const int lo = std::min(n_min_, other.n_min_);
    const int hi = std::max(n_max(), other.n_max());
    std::vector<cplx> c(static_cast<std::size_t>(hi - lo + 1));
    for (int n = lo; n <= hi; ++n)
        c[n - lo] = coeff(n) + other.coeff(n);
    return PolarSeries(lo, std::move(c));
}

PolarSeries PolarSeries::operator*(cplx s) const
{
    std::vector<cplx> c(c_);
    for (auto& x : c)
        x *= s;
    return PolarSeries(n_min_, std::move(c));
}

PolarSeries sigma_r_coeff(const PolarSeries& f_minus, double r)
{
    require_minus(f_minus, "sigma_r_coeff");
    const int kmax = -f_minus.n_min();
    const auto ratio = rising_ratios(r, kmax);
    std::vector<cplx> out(static_cast<std::size_t>(kmax) + 1);
    // w^{n} -> w^{n-1}; output spans n_min-1 .. -1
    for (int n = f_minus.n_min(); n <= 0; ++n) {
        const cplx c = f_minus.coeff(n);
        const int k = -n;
        if (c == cplx(0.0))
            continue;
        if (ratio[k].vanishes)
            throw PoleError("sigma_r_coeff: (r)_" + std::to_string(k) + " vanishes for r = " +
                            std::to_string(r));
        out[static_cast<std::size_t>(n - f_minus.n_min())] = c / ratio[k].value;
    }
    return PolarSeries(f_minus.n_min() - 1, std::move(out));
}

PolarSeries j_r(const PolarSeries& series, double r)
{
    if (series.n_min() > -1)
        return PolarSeries::zero();
    const int top = std::min(series.n_max(), -1);
    const int kmax = -series.n_min() - 1;
    const auto ratio = rising_ratios(r, kmax);
    // w^m -> w^{m+1}, m from n_min to top
    std::vector<cplx> out(static_cast<std::size_t>(top - series.n_min() + 1));
    for (int m = series.n_min(); m <= top; ++m)
        out[m - series.n_min()] = series.coeff(m) * ratio[-m - 1].value;
    return PolarSeries(series.n_min() + 1, std::move(out));
}

BracketValue bracket(const PolarSeries& h_plus, const PolarSeries& f_minus, double r)
{
    require_plus(h_plus, "bracket");
    require_minus(f_minus, "bracket");
    const int kmax = -f_minus.n_min();
    const auto ratio = rising_ratios(r, kmax);
    for (int k = 0; k <= kmax; ++k) {
        if (ratio[k].vanishes && f_minus.coeff(-k) != cplx(0.0))
            throw PoleError("bracket: (r)_" + std::to_string(k) + " vanishes for r = " +
                            std::to_string(r) + " on the support of f");
    }
    const int top = std::min(h_plus.n_max(), kmax);
    special::CompensatedComplexSum sum;
    std::vector<double> magnitude;
    for (int n = std::max(0, h_plus.n_min()); n <= top; ++n) {
        const cplx d = f_minus.coeff(-n);
        const cplx term = d == cplx(0.0) ? cplx(0.0) : h_plus.coeff(n) * d / ratio[n].value;
        sum += term;
        magnitude.push_back(std::abs(term));
    }
    double tail = 0.0;
    const int len = static_cast<int>(magnitude.size());
    if (len >= 8) {
        const double last = magnitude[len - 1];
        const double earlier = magnitude[len - 5];
        if (earlier > 0 && last > 0) {
            const double rho = std::pow(last / earlier, 0.25);
            tail = rho < 1.0 ? last * rho / (1.0 - rho) : std::numeric_limits<double>::infinity();
        }
    }
    return {sum.value(), tail};
}

cplx lifted_pairing(const PolarSeries& h_plus, const PolarSeries& lifted)
{
    require_plus(h_plus, "lifted_pairing");
    special::CompensatedComplexSum sum;
    for (int n = h_plus.n_min(); n <= h_plus.n_max(); ++n)
        sum += h_plus.coeff(n) * lifted.coeff(-n - 1);
    return sum.value();
}

cplx hypergeometric_11r(cplx x, double r)
{
    if (r <= 0 && r == std::floor(r))
        throw PoleError("hypergeometric_11r: r must not be a non-positive integer");
    if (std::abs(x) > 0.99)
        throw DomainError("hypergeometric_11r: series argument exceeds 0.99 in modulus");
    cplx term = 1.0;
    cplx sum = 1.0;
    for (int n = 1; n < 200000; ++n) {
        term *= x * (static_cast<double>(n) / (r + n - 1));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) && n > 4)
            return sum;
    }
    throw ConvergenceError("hypergeometric_11r: series did not converge");
}

cplx sigma_r_contour(const std::function<cplx(cplx)>& f_minus, double r, cplx z, double c)
{
    if (!(c > 0.0 && c < 1.0))
        throw ParameterError("sigma_r_contour: contour radius must lie in (0, 1)");
    const cplx wz = disk_coordinate(z);
    if (!(std::abs(wz) > c))
        throw ParameterError("sigma_r_contour: z must lie outside the contour");
    if (c / std::abs(wz) > 0.99)
        throw DomainError("sigma_r_contour: hypergeometric argument ratio exceeds 0.99");

    // tau = i (1+v)/(1-v), v = c e^{i theta}: d tau/(tau^2+1) = d theta / 2
    auto integrand = [&](double theta) {
        const cplx v = std::polar(c, theta);
        return f_minus(from_disk(v)) * hypergeometric_11r(v / wz, r);
    };
    // periodic analytic integrand: the trapezoidal rule converges geometrically
    auto trapezoid = [&](int n) {
        special::CompensatedComplexSum sum;
        for (int k = 0; k < n; ++k)
            sum += integrand(2 * std::numbers::pi * k / n);
        return sum.value() * (2 * std::numbers::pi / n);
    };
    int n = 64;
    cplx previous = trapezoid(n);
    while (n < (1 << 16)) {
        n *= 2;
        const cplx current = trapezoid(n);
        if (std::abs(current - previous) <= 1e-14 * std::max(1.0, std::abs(current))) {
            previous = current;
            break;
        }
        previous = current;
    }
    return previous / (2 * std::numbers::pi) / wz;
}

PolarSeries eichler_kernel_minus_expansion(cplx tau1, double r, int N)
{
    const cplx u1 = disk_coordinate(tau1);
    if (!(std::abs(u1) < 1.0))
        throw DomainError("eichler_kernel_minus_expansion: tau1 must lie in the upper half-plane");
    const cplx scale = special::cpow(1.0 - u1, 2.0 - r);
    std::vector<cplx> c(static_cast<std::size_t>(N) + 1);
    // (-1)^m binom(r-2, m) = (2-r)_m / m!
    cplx term = scale;
    for (int m = 0; m <= N; ++m) {
        c[N - m] = term;
        term *= u1 * ((2.0 - r + m) / (m + 1.0));
    }
    return PolarSeries(-N, std::move(c));
}

PolarSeries knopp_kernel_plus_expansion(cplx tau2, double r, int N)
{
    const cplx u2 = disk_coordinate(tau2);
    if (!(std::abs(u2) < 1.0))
        throw DomainError("knopp_kernel_plus_expansion: tau2 must lie in the upper half-plane");
    const cplx ub = std::conj(u2);
    const cplx scale = special::cpow(1.0 - ub, 2.0 - r);
    std::vector<cplx> c(static_cast<std::size_t>(N) + 1);
    cplx term = scale;
    for (int n = 0; n <= N; ++n) {
        c[n] = term;
        term *= ub * ((2.0 - r + n) / (n + 1.0));
    }
    return PolarSeries(0, std::move(c));
}

cplx bracket_closed_form(cplx tau1, cplx tau2, double r)
{
    return special::cpow(2.0 * I, 2.0 - r) * special::cpow(tau1 - std::conj(tau2), r - 2.0);
}

int kernel_truncation(cplx tau1, cplx tau2, double tol)
{
    const double u = std::max(std::abs(disk_coordinate(tau1)), std::abs(disk_coordinate(tau2)));
    if (u == 0.0)
        return 20;
    return static_cast<int>(std::ceil(std::log(tol) / std::log(u))) + 20;
}

} // namespace modcup::polar
