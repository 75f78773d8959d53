#pragma once

// The Psi kernel, the trilinear form T as a Fourier triple sum and as a
// nested integral, table normalization, and the Haberland pairing.

#include <complex>
#include <iosfwd>
#include <utility>
#include <vector>

#include "modcup/forms.hpp"
#include "modcup/quad.hpp"
#include "modcup/special.hpp"

namespace modcup::triform {

/// Weights and eta parameters of (f1, f2, f3).
struct WeightTriple {
    double r1, r2, r3;
    double p1, p2, p3;

    /// r3 = 4 - r1 - r2, p = (r1, r2, -(r1 + r2)): the eta/E4 setting.
    static WeightTriple from_eta(double r1, double r2);
    /// Throws ParameterError unless r1 + r2 + r3 = 4, p1 + p2 + p3 = 0,
    /// p_j = r_j mod 2, r1 < 2, 0 < r2 < 2 and r3 > 0.
    void validate() const;
};

/// Psi for fixed (r1, r2). The u^{1-r2} (1-u)^{1-r1} factor sits in the
/// quadrature weight; the remaining integrand is smooth on [0, 1].
class PsiKernel {
public:
    PsiKernel(double r1, double r2);

    /// e^{-2 pi mu2 - pi sqrt3 (mu1 + mu3)} int_0^1 u^{1-r2} (1-u)^{1-r1}
    ///   e^{-pi (2 - sqrt3) mu3 u} / (mu2 + mu3 u) S(pi (mu1 + (1-u) mu3)) du,
    /// S(x) = sin(x)/x. Needs mu2 > 0 and mu2 + mu3 > 0; mu3 < 0 is allowed.
    double bare(double mu1, double mu2, double mu3, double tol) const;
    /// bare / (2 pi i).
    cplx operator()(double mu1, double mu2, double mu3, double tol) const;
    /// The mu3 = 0 value of bare, B(2-r2, 2-r1) S(pi mu1) e^{...} / mu2.
    double bare_at_zero(double mu1, double mu2) const;
    /// As bare, with the smooth factor multiplied by `scale`.
    double bare_scaled(double mu1, double mu2, double mu3, double tol, double scale) const;

    double r1() const { return r1_; }
    double r2() const { return r2_; }
    /// All bare values are bounded by prefactor * mass * e^{max(0, -pi(2-sqrt3)mu3)} / min(mu2, mu2+mu3).
    double mass() const { return mass_; }

private:
    double r1_, r2_;
    double mass_; // B(2 - r2, 2 - r1)
    quad::SingularIntegrator integrator_;
};

/// psi_kernel with the 1/(2 pi i) prefactor; mu2 > 0 and mu3 >= 0.
cplx psi_kernel(double r1, double r2, double mu1, double mu2, double mu3, double tol);

struct TripleFormResult {
    cplx value;           // full T, or the bare table sum for table_entry
    double tail_estimate; // truncated and skipped terms
    int M1 = 0, M2 = 0, M3 = 0;
    long terms = 0;       // Psi evaluations
    long skipped = 0;     // terms below the skip bound
};

/// Bare triple sum sum a1(m1) a2(m2) a3(m3) Psi~(mu1, mu2, mu3) to absolute tol.
/// Partitioned over m1 across `threads` workers (0: hardware concurrency); the
/// result does not depend on the thread count.
TripleFormResult bare_triple_sum(const WeightTriple& wt, const forms::QExpansion& f1,
                                 const forms::QExpansion& f2, const forms::QExpansion& f3,
                                 double tol, int threads = 0);

/// T(f1, f2, f3) from the Fourier coefficients, to absolute tol. Throws
/// TruncationError when the tail estimate exceeds tol.
TripleFormResult triple_form_series(const WeightTriple& wt, const forms::QExpansion& f1,
                                    const forms::QExpansion& f2, const forms::QExpansion& f3,
                                    double tol, int threads = 0);

/// T(f1, f2, f3) by nested quadrature over the arc rho-1 -> rho, the ray
/// i -> i infinity and the chord parameter u in [0, 1].
cplx triple_form_direct(const WeightTriple& wt, const forms::QExpansion& f1,
                        const forms::QExpansion& f2, const forms::QExpansion& f3, double tol);

/// Common factor of the series: T = series_prefactor * bare sum.
cplx series_prefactor(const WeightTriple& wt);

/// Table value for f1 = eta^{2 r1}, f2 = eta^{2 r2}, f3 = E4 eta^{-2(r1+r2)},
/// truncated at M: the bare triple sum (real).
TripleFormResult table_entry(double r1, double r2, int M, double tol, int threads = 0);

/// The filled cells of the published table, row by row.
std::vector<std::pair<double, double>> table1_grid();

/// One line of a table reference file: `r1,r2,value,rel_tol`.
struct TableCell {
    double r1, r2, value, rel_tol;
};

/// Reads a reference file; blank lines and lines starting with '#' are
/// ignored. Throws ParameterError on malformed lines.
std::vector<TableCell> read_table_reference(std::istream& in);

/// (2i)^{2-r} int_{arc} f1(tau1) int_{i}^{i inf} conj(f2(tau2)) (tau1 - conj(tau2))^{r-2}
/// d conj(tau2) d tau1.
cplx haberland_lhs(const forms::QExpansion& f1, const forms::QExpansion& f2, double r,
                   double tol);

/// Petersson product int_F f1 conj(f2) y^{r-2} dx dy over the fundamental domain.
cplx petersson(const forms::QExpansion& f1, const forms::QExpansion& f2, double r, double tol);

} // namespace modcup::triform
