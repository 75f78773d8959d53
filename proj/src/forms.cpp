#include "modcup/forms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "modcup/error.hpp"

namespace modcup::forms {

namespace mp = boost::multiprecision;
using integer = mp::mpz_int;

namespace {

constexpr double pi = std::numbers::pi;

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

using Mat = std::array<long long, 4>; // a b c d

Mat mat_mul(const Mat& x, const Mat& y)
{
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

Mat generator_matrix(Generator g)
{
    switch (g) {
    case Generator::T: return {1, 1, 0, 1};
    case Generator::T_inv: return {1, -1, 0, 1};
    case Generator::S: return {0, -1, 1, 0};
    case Generator::S_inv: return {0, 1, -1, 0};
    }
    return {1, 0, 0, 1};
}

cplx phase(double angle) { return std::polar(1.0, angle); }

cplx generator_value(const MultiplierSystem& v, Generator g)
{
    switch (g) {
    case Generator::T: return v.on_T();
    case Generator::T_inv: return 1.0 / v.on_T();
    case Generator::S: return v.on_S();
    case Generator::S_inv: return 1.0 / v.on_S();
    }
    return 1.0;
}

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// r = R * 2^-e exactly, e >= 0.
void split_binary(double r, integer& R, long& e)
{
    int exp2 = 0;
    const double mant = std::frexp(r, &exp2);
    auto scaled = static_cast<long long>(std::ldexp(mant, 53));
    e = 53 - exp2;
    while (e > 0 && scaled % 2 == 0) {
        scaled /= 2;
        --e;
    }
    R = scaled;
    if (e < 0) {
        R <<= static_cast<unsigned>(-e);
        e = 0;
    }
}

} // namespace

cplx MultiplierSystem::on_T() const { return phase(pi * p / 6.0); }
cplx MultiplierSystem::on_S() const { return phase(-pi * p / 2.0); }

bool MultiplierSystem::compatible_with(double weight) const
{
    const double d = (p - weight) / 2.0;
    return is_integer(d);
}

bool MultiplierSystem::is_character() const { return is_integer(p); }

cplx multiplier_value(const MultiplierSystem& v, std::span<const Generator> word)
{
    if (word.size() > max_word_length)
        throw ParameterError("multiplier_value: word longer than " +
                             std::to_string(max_word_length));
    if (v.is_character()) {
        cplx out = 1.0;
        for (Generator g : word)
            out *= generator_value(v, g);
        return out;
    }
    Mat m{1, 0, 0, 1};
    for (Generator g : word)
        m = mat_mul(m, generator_matrix(g));
    const auto [a, b, c, d] = m;
    if (c == 0) {
        // +-T^n
        const long long n = a * b;
        cplx val = phase(pi * v.p * static_cast<double>(n) / 6.0);
        if (a < 0)
            val *= phase(-pi * v.p);
        return val;
    }
    if (a == 0 && (c == 1 || c == -1)) {
        // +-S T^n
        const long long n = c * d;
        cplx val = phase(pi * v.p * static_cast<double>(n) / 6.0);
        val *= c > 0 ? phase(-pi * v.p / 2.0) : phase(pi * v.p / 2.0);
        return val;
    }
    throw ParameterError("multiplier_value: for non-integral p only words equal to "
                         "+-T^n or +-S T^n are supported");
}

std::vector<Generator> parse_word(const std::string& text)
{
    std::vector<Generator> out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (ch == ' ' || ch == '*' || ch == ',')
            continue;
        bool inverse = false;
        if (text.compare(i + 1, 3, "^-1") == 0) {
            inverse = true;
        }
        if (ch == 'T')
            out.push_back(inverse ? Generator::T_inv : Generator::T);
        else if (ch == 'S')
            out.push_back(inverse ? Generator::S_inv : Generator::S);
        else if (ch == 't')
            out.push_back(Generator::T_inv);
        else if (ch == 's')
            out.push_back(Generator::S_inv);
        else
            throw ParameterError(std::string("parse_word: unexpected character '") + ch + "'");
        if (inverse)
            i += 3;
    }
    return out;
}

QExpansion::QExpansion(double weight, double p, std::vector<double> coeffs)
    : weight_(weight), p_(p), coeffs_(std::move(coeffs))
{
    if (coeffs_.empty())
        coeffs_.push_back(0.0);
    for (double a : coeffs_) {
        if (!std::isfinite(a))
            throw ParameterError("QExpansion: non-finite coefficient");
    }
    fit_tail_model();
}

void QExpansion::fit_tail_model()
{
    const int M = order();
    auto max_abs = [&](int lo, int hi) {
        double out = 0.0;
        for (int m = std::max(lo, 0); m <= std::min(hi, M); ++m)
            out = std::max(out, std::abs(coeffs_[m]));
        return out;
    };
    if (M < 4) {
        tail_amp_ = max_abs(0, M);
        tail_growth_ = 2.0;
        return;
    }
    tail_amp_ = max_abs(M / 2, M);
    const double lower = max_abs(M / 2, (3 * M) / 4 - 1);
    const double upper = max_abs((3 * M) / 4, M);
    tail_growth_ = 1.0;
    if (lower > 0 && upper > lower)
        tail_growth_ = std::pow(upper / lower, 1.0 / std::max(1, M - (3 * M) / 4));
}

bool QExpansion::is_zero() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double a) { return a == 0.0; });
}

double QExpansion::leading_mu() const
{
    for (int m = 0; m <= order(); ++m) {
        if (coeffs_[m] != 0.0)
            return mu(m);
    }
    return std::numeric_limits<double>::infinity();
}

double QExpansion::decay_rate() const { return 2 * pi * leading_mu(); }

cplx QExpansion::operator()(cplx tau) const
{
    // q^{p/12} * sum a(m) q^m by Horner in q
    const cplx q = std::exp(cplx(0.0, 2 * pi) * tau);
    cplx acc = 0.0;
    for (int m = order(); m >= 0; --m)
        acc = acc * q + coeffs_[m];
    return acc * std::exp(cplx(0.0, 2 * pi * p_ / 12.0) * tau);
}

double QExpansion::tail_bound(double y) const
{
    if (tail_amp_ == 0.0)
        return 0.0;
    const double x = std::exp(-2 * pi * y);
    const double gx = tail_growth_ * x;
    if (gx >= 1.0)
        return std::numeric_limits<double>::infinity();
    return 10.0 * tail_amp_ * std::exp(-2 * pi * mu(order()) * y) * gx / (1.0 - gx);
}

QExpansion::Evaluation QExpansion::evaluate(cplx tau, double tail_tol) const
{
    if (!(tau.imag() > 0))
        throw DomainError("QExpansion::evaluate: tau must lie in the upper half-plane");
    const double bound = tail_bound(tau.imag());
    if (bound > tail_tol)
        throw TruncationError("QExpansion::evaluate: tail bound " + fmt17(bound) +
                              " exceeds tolerance " + fmt17(tail_tol) + " at Im tau = " +
                              fmt17(tau.imag()));
    return {(*this)(tau), bound};
}

QExpansion QExpansion::scaled(double c) const
{
    std::vector<double> a(coeffs_.begin(), coeffs_.end());
    for (double& x : a)
        x *= c;
    return QExpansion(weight_, p_, std::move(a));
}

rational EtaPolynomial::operator()(const rational& r) const
{
    rational acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * r + *it;
    return acc;
}

double EtaPolynomial::operator()(double r) const
{
    return (*this)(rational(r)).convert_to<double>();
}

std::vector<double> eta_power_coeffs(double r, int M)
{
    if (M < 0)
        throw DomainError("eta_power_coeffs: M must be non-negative");
    std::vector<double> out(static_cast<std::size_t>(M) + 1, 0.0);
    out[0] = 1.0;
    if (r == 0.0 || M == 0)
        return out;

    // m p_m = -2r sum_{k=1}^m sigma_1(k) p_{m-k}, run over the integers
    // q_m = m! 2^{e m} p_m where r = R 2^{-e}.
    integer R;
    long e = 0;
    split_binary(r, R, e);
    std::vector<integer> q(static_cast<std::size_t>(M) + 1);
    q[0] = 1;
    integer factorial = 1;
    for (int m = 1; m <= M; ++m) {
        integer acc = 0;
        integer falling = 1; // (m-1)! / (m-k)!
        for (int k = 1; k <= m; ++k) {
            if (k > 1)
                falling *= (m - k + 1);
            integer term = q[m - k] * falling;
            term *= static_cast<unsigned long>(special::sigma_div(1, k));
            term <<= static_cast<unsigned>(e * (k - 1));
            acc += term;
        }
        q[m] = -2 * R * acc;
        factorial *= m;
        integer denominator = factorial;
        denominator <<= static_cast<unsigned>(e * m);
        out[m] = rational(q[m], denominator).convert_to<double>();
    }
    return out;
}

std::vector<EtaPolynomial> eta_power_polys(int M)
{
    if (M < 0)
        throw DomainError("eta_power_polys: M must be non-negative");
    std::vector<EtaPolynomial> out;
    out.push_back({0, {rational(1)}});
    for (int m = 1; m <= M; ++m) {
        std::vector<rational> acc(static_cast<std::size_t>(m), rational(0));
        for (int k = 1; k <= m; ++k) {
            const rational s(static_cast<unsigned long>(special::sigma_div(1, k)));
            const auto& prev = out[m - k].coeffs;
            for (std::size_t i = 0; i < prev.size(); ++i)
                acc[i] += s * prev[i];
        }
        // multiply by -2r/m
        EtaPolynomial poly{m, std::vector<rational>(static_cast<std::size_t>(m) + 1, rational(0))};
        const rational factor(-2, m);
        for (std::size_t i = 0; i < acc.size(); ++i)
            poly.coeffs[i + 1] = factor * acc[i];
        out.push_back(std::move(poly));
    }
    return out;
}

EtaPolynomial eta_power_poly(int m) { return eta_power_polys(m).back(); }

QExpansion e4_expansion(int M)
{
    if (M < 0)
        throw DomainError("e4_expansion: M must be non-negative");
    std::vector<double> a(static_cast<std::size_t>(M) + 1);
    a[0] = 1.0;
    for (int n = 1; n <= M; ++n)
        a[n] = 240.0 * static_cast<double>(special::sigma_div(3, n));
    return QExpansion(4.0, 0.0, std::move(a));
}

QExpansion eta_power_expansion(double r, int M)
{
    return QExpansion(r, r, eta_power_coeffs(r, M));
}

QExpansion qexp_mul(const QExpansion& f, const QExpansion& g, int M)
{
    return QExpansion(f.weight() + g.weight(), f.p() + g.p(),
                      convolve<double>(f.coeffs(), g.coeffs(), M));
}

QExpansion e4_eta_product(double r1, double r2, int M)
{
    return qexp_mul(e4_expansion(M), eta_power_expansion(-(r1 + r2), M), M);
}

void write_coeff_csv(std::ostream& out, const QExpansion& f)
{
    out << "m,mu,a\n";
    for (int m = 0; m <= f.order(); ++m)
        out << m << ',' << fmt17(f.mu(m)) << ',' << fmt17(f.coeff(m)) << '\n';
}

} // namespace modcup::forms
