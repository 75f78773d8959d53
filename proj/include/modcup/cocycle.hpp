#pragma once

// Eichler and Knopp integrals of real-weight forms, the cup-product
// representative, cocycle residuals and polynomial coinvariants.

#include <complex>

#include "modcup/forms.hpp"
#include "modcup/quad.hpp"
#include "modcup/special.hpp"

namespace modcup::cocycle {

/// A point of the upper half-plane or the cusp i infinity.
struct Endpoint {
    cplx z = 0.0;
    bool at_infinity = false;

    static Endpoint point(cplx z) { return {z, false}; }
    static Endpoint cusp() { return {0.0, true}; }
};

/// c_f(z1, z2; t) = int_{z1}^{z2} f(tau) (tau - t)^{r-2} d tau for Im t < 0,
/// arg(tau - t) in (-pi/2, 3pi/2). Finite endpoints are joined by a segment;
/// an i infinity endpoint uses the vertical ray above the finite one.
cplx eichler_integral(const forms::QExpansion& f, Endpoint z1, Endpoint z2, cplx t, double tol);

/// The same integrand along an explicit compact path.
cplx eichler_integral(const forms::QExpansion& f, const quad::ContourPath& path, cplx t,
                      double tol);

/// Knopp counterpart, int conj(f(tau)) (conj(tau) - z)^{r-2} d conj(tau) for
/// Im z > 0, evaluated as conj(c_f(z1, z2; conj(z))).
cplx knopp_integral(const forms::QExpansion& f, Endpoint z1, Endpoint z2, cplx z, double tol);

/// Eichler cocycle with its endpoints bound, evaluated in t.
class CocycleValue {
public:
    CocycleValue(const forms::QExpansion& f, Endpoint z1, Endpoint z2, double tol)
        : f_(&f), z1_(z1), z2_(z2), tol_(tol)
    {}
    cplx operator()(cplx t) const { return eichler_integral(*f_, z1_, z2_, t, tol_); }
    double weight() const { return f_->weight(); }

private:
    const forms::QExpansion* f_;
    Endpoint z1_, z2_;
    double tol_;
};

/// c_{f1}(rho - 1, rho; t) * c_{f2}(i, i infinity; t).
cplx cup_representative(const forms::QExpansion& f1, const forms::QExpansion& f2, cplx t,
                        double tol);

/// |c_f(g^{-1} z1, g^{-1} z2; t) - v(g)^{-1} (ct+d)^{r-2} c_f(z1, z2; g t)| for
/// g in {S, T}, arg(ct+d) in [-pi, pi).
double equivariance_residual(const forms::QExpansion& f, const forms::MultiplierSystem& v,
                             forms::Generator g, Endpoint z1, Endpoint z2, cplx t, double tol);

/// Characters attached to S and T in the polynomial action.
enum class CharacterConvention {
    literal, // v(T) with T and v(S)^{-1} with S
    direct,  // v(T), v(S)
    inverse, // v(T)^{-1}, v(S)^{-1}
};

struct CoinvariantDim {
    int dim;
    int rank;
    /// Smallest factor separating a singular value from the rank threshold.
    double margin;
};

/// Minimum threshold margin accepted by poly_coinvariant_dim.
inline constexpr double coinvariant_margin = 1e3;

/// dim V - rank[(I - M_S) | (I - M_T)] on V = span{t^0, ..., t^{r-2}} with
/// t^j |T = chi_T (t+1)^j and t^j |S = chi_S (-1)^j t^{r-2-j}.
/// Throws AmbiguityError when the margin falls below coinvariant_margin.
CoinvariantDim poly_coinvariant_dim(int r, int p,
                                    CharacterConvention conv = CharacterConvention::literal);

} // namespace modcup::cocycle
