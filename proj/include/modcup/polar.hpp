#pragma once

// Laurent series in the disk coordinate w = (z - i)/(z + i), the operator
// J_r with its lift sigma_r, and the duality bracket in coefficient form.

#include <complex>
#include <functional>
#include <vector>

#include "modcup/special.hpp"

namespace modcup::polar {

/// Disk coordinate w(z) = (z - i)/(z + i).
cplx disk_coordinate(cplx z);
/// Inverse map z = i (1 + w)/(1 - w).
cplx from_disk(cplx w);

/// Finite Laurent series sum_{n = n_min}^{n_max} c_n w^n.
class PolarSeries {
public:
    PolarSeries() = default;
    PolarSeries(int n_min, std::vector<cplx> coeffs);
    static PolarSeries monomial(int n, cplx c = 1.0);
    static PolarSeries zero() { return PolarSeries(0, {0.0}); }

    int n_min() const { return n_min_; }
    int n_max() const { return n_min_ + static_cast<int>(c_.size()) - 1; }
    /// Coefficient of w^n, zero outside the stored range.
    cplx coeff(int n) const;

    /// Only powers n >= 0.
    bool is_plus() const { return n_min_ >= 0; }
    /// Only powers n <= 0.
    bool is_minus() const { return n_max() <= 0; }

    cplx evaluate(cplx w) const;

    PolarSeries operator+(const PolarSeries& other) const;
    PolarSeries operator*(cplx s) const;

private:
    int n_min_ = 0;
    std::vector<cplx> c_{0.0};
};

/// sigma_r on a minus-part series: c_n w^n -> (|n|!/(r)_{|n|}) c_n w^{n-1}.
/// PoleError when (r)_{|n|} vanishes on the support.
PolarSeries sigma_r_coeff(const PolarSeries& f_minus, double r);

/// J_r: c_m w^m -> c_m (r)_{-m-1}/(-m-1)! w^{m+1} for m <= -1; m >= 0 is
/// annihilated.
PolarSeries j_r(const PolarSeries& series, double r);

struct BracketValue {
    cplx value;
    double tail_estimate; // geometric extrapolation, 0 when not applicable
};

/// [h, f]_r = sum_{n >= 0} n!/(r)_n c_n d_{-n} with h^+ = sum c_n w^n and
/// f^- = sum d_m w^m.
BracketValue bracket(const PolarSeries& h_plus, const PolarSeries& f_minus, double r);

/// Residue pairing of h^+ with an already lifted sigma_r f^-:
/// sum_n c_n e_{-n-1}. Plus-part terms of the lift do not contribute.
cplx lifted_pairing(const PolarSeries& h_plus, const PolarSeries& lifted);

/// sum_{n >= 0} n!/(r)_n x^n; DomainError when |x| > 0.99.
cplx hypergeometric_11r(cplx x, double r);

/// sigma_r f^-(z) by the contour integral over |w(tau)| = c with the
/// hypergeometric kernel. f_minus is f^- as a function of tau.
cplx sigma_r_contour(const std::function<cplx(cplx)>& f_minus, double r, cplx z, double c);

/// q_{tau1}^-(z) = ((tau1 - z)/(i - z))^{r-2} expanded in w^{-m}, m = 0..N.
PolarSeries eichler_kernel_minus_expansion(cplx tau1, double r, int N);

/// p_{tau2}^+(z) = ((conj(tau2) - z)/(-i - z))^{r-2} expanded in w^n, n = 0..N.
PolarSeries knopp_kernel_plus_expansion(cplx tau2, double r, int N);

/// (2i)^{2-r} (tau1 - conj(tau2))^{r-2}, principal branches.
cplx bracket_closed_form(cplx tau1, cplx tau2, double r);

/// Smallest N with max|u|^N below tol, plus a margin of 20 terms.
int kernel_truncation(cplx tau1, cplx tau2, double tol);

} // namespace modcup::polar
