#pragma once

// q-expansions of eta powers, E4 and their products; eta multiplier systems.

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "modcup/special.hpp"

namespace modcup::forms {

using rational = boost::multiprecision::mpq_rational;

/// Multiplier system v[p] of eta^{2p}; depends on p modulo 12 only.
struct MultiplierSystem {
    double p = 0.0;

    /// v(T) = e^{pi i p / 6}
    cplx on_T() const;
    /// v(S) = e^{-pi i p / 2}
    cplx on_S() const;
    /// p == r (mod 2) up to rounding.
    bool compatible_with(double weight) const;
    /// p is an integer, so v[p] is a character of SL2(Z).
    bool is_character() const;
};

enum class Generator { T, T_inv, S, S_inv };

/// Maximum accepted word length for multiplier_value.
inline constexpr std::size_t max_word_length = 64;

/// Value of v[p] on the group element spelled by `word` (left to right).
///
/// For integral p every word is accepted and the value is the product of the
/// generator values. Otherwise only words whose matrix is +-T^n or +-S T^n are
/// accepted; those are evaluated from the eta transformation law with the
/// argument convention arg(cz+d) in (-pi, pi]. Other words throw
/// ParameterError: off those classes the values v[p](g1 g2) and
/// v[p](g1) v[p](g2) differ by a consistency factor.
cplx multiplier_value(const MultiplierSystem& v, std::span<const Generator> word);

/// Parses a word such as "S T T^-1 S^-1" or "STtS" (t, s = inverses).
std::vector<Generator> parse_word(const std::string& text);

/// A truncated Fourier expansion f(z) = sum_{m=0}^{M} a(m) e^{2 pi i (m + p/12) z}.
class QExpansion {
public:
    QExpansion() = default;
    QExpansion(double weight, double p, std::vector<double> coeffs);

    double weight() const { return weight_; }
    double p() const { return p_; }
    /// Truncation order M (index of the last stored coefficient).
    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    std::span<const double> coeffs() const { return coeffs_; }
    double coeff(int m) const { return m >= 0 && m <= order() ? coeffs_[m] : 0.0; }
    /// Exponent offset (12 m + p) / 12.
    double mu(int m) const { return (12.0 * m + p_) / 12.0; }
    MultiplierSystem multiplier() const { return {p_}; }

    bool is_zero() const;
    /// Smallest exponent carrying a nonzero coefficient (+inf for zero).
    double leading_mu() const;
    /// All exponents with nonzero coefficient are positive.
    bool is_cuspidal() const { return leading_mu() > 0; }
    /// Exponential decay rate 2 pi leading_mu of |f(x+iy)| as y grows.
    double decay_rate() const;

    /// Truncated sum at tau; no tail check.
    cplx operator()(cplx tau) const;

    struct Evaluation {
        cplx value;
        double tail_bound;
    };
    /// Truncated sum plus a bound for the omitted terms. Throws
    /// TruncationError when the bound exceeds tail_tol.
    Evaluation evaluate(cplx tau, double tail_tol) const;
    /// Tail bound at height y = Im tau.
    double tail_bound(double y) const;

    QExpansion scaled(double c) const;

private:
    void fit_tail_model();

    double weight_ = 0.0;
    double p_ = 0.0;
    std::vector<double> coeffs_{1.0};
    double tail_amp_ = 0.0;   // max |a(m)| over the upper half of the terms
    double tail_growth_ = 1.0; // per-index growth allowance
};

/// Coefficients of an eta power in exact rationals.
struct EtaPolynomial {
    int m = 0;
    /// coeffs[k] multiplies r^k; degree m.
    std::vector<rational> coeffs;

    rational operator()(const rational& r) const;
    /// Exact evaluation at the binary64 value r, rounded once.
    double operator()(double r) const;
};

/// p_0(r) .. p_M(r) with eta^{2r} = q^{r/12} sum_m p_m(r) q^m.
/// Computed exactly from the binary64 value of r and rounded once per entry.
std::vector<double> eta_power_coeffs(double r, int M);

/// p_m as an exact polynomial in r.
EtaPolynomial eta_power_poly(int m);
/// p_0 .. p_M in one pass.
std::vector<EtaPolynomial> eta_power_polys(int M);

/// E4 = 1 + 240 sum sigma_3(n) q^n.
QExpansion e4_expansion(int M);
/// eta^{2r}: weight r, p = r.
QExpansion eta_power_expansion(double r, int M);
/// Cauchy product truncated at M; weight and p add.
QExpansion qexp_mul(const QExpansion& f, const QExpansion& g, int M);
/// E4 * eta^{-2(r1+r2)}, the third form of the numerical experiments.
QExpansion e4_eta_product(double r1, double r2, int M);

/// Truncated Cauchy convolution, usable with binary64 or exact coefficients.
template <typename T>
std::vector<T> convolve(std::span<const T> a, std::span<const T> b, int M)
{
    std::vector<T> out(static_cast<std::size_t>(M) + 1, T(0));
    for (int m = 0; m <= M; ++m) {
        T acc(0);
        for (int i = 0; i <= m; ++i) {
            const int j = m - i;
            if (i < static_cast<int>(a.size()) && j < static_cast<int>(b.size()))
                acc += a[i] * b[j];
        }
        out[m] = acc;
    }
    return out;
}

/// CSV dump with header `m,mu,a`.
void write_coeff_csv(std::ostream& out, const QExpansion& f);

} // namespace modcup::forms
