#include "modcup/cocycle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "modcup/error.hpp"

namespace modcup::cocycle {

namespace {

using forms::Generator;
using forms::QExpansion;

constexpr cplx I(0.0, 1.0);

// The kernel (tau - t)^{r-2} only grows polynomially on a ray, so a fraction
// of the form's decay rate still bounds the product.
constexpr double ray_rate_fraction = 0.9;

auto integrand(const QExpansion& f, cplx t, double tol)
{
    const double s = f.weight() - 2.0;
    return [&f, t, s, tol](cplx tau) {
        return f.evaluate(tau, tol).value * special::cpow(tau - t, s, special::ArgRange::eichler());
    };
}

void require_lower(cplx t, const char* who)
{
    if (!(t.imag() < 0))
        throw DomainError(std::string(who) + ": t must lie in the lower half-plane");
}

void require_upper(Endpoint e, const char* who)
{
    if (!e.at_infinity && !(e.z.imag() > 0))
        throw DomainError(std::string(who) + ": endpoints must lie in the upper half-plane");
}

// int_{z0}^{i infinity}
cplx to_cusp(const QExpansion& f, cplx z0, cplx t, double tol)
{
    if (f.is_zero())
        return 0.0;
    if (!f.is_cuspidal())
        throw DecayError("eichler_integral: an endpoint at i infinity needs a cusp form "
                         "(leading exponent " + std::to_string(f.leading_mu()) + ")");
    return quad::integrate_vertical_ray(integrand(f, t, tol), z0.real(), z0.imag(),
                                        ray_rate_fraction * f.decay_rate(), tol);
}

cplx apply(Generator g, cplx z)
{
    switch (g) {
    case Generator::T: return z + 1.0;
    case Generator::T_inv: return z - 1.0;
    case Generator::S:
    case Generator::S_inv: return -1.0 / z;
    }
    return z;
}

Endpoint apply_inverse(Generator g, Endpoint e)
{
    if (e.at_infinity) {
        if (g == Generator::S)
            throw ParameterError("equivariance_residual: S moves i infinity to the real line");
        return e;
    }
    return Endpoint::point(apply(g == Generator::T ? Generator::T_inv : Generator::S_inv, e.z));
}

} // namespace

cplx eichler_integral(const QExpansion& f, Endpoint z1, Endpoint z2, cplx t, double tol)
{
    require_lower(t, "eichler_integral");
    require_upper(z1, "eichler_integral");
    require_upper(z2, "eichler_integral");
    if (z1.at_infinity && z2.at_infinity)
        return 0.0;
    if (z1.at_infinity)
        return -to_cusp(f, z2.z, t, tol);
    if (z2.at_infinity)
        return to_cusp(f, z1.z, t, tol);
    if (z1.z == z2.z || f.is_zero())
        return 0.0;
    return quad::integrate_path(integrand(f, t, tol), quad::ContourPath::segment(z1.z, z2.z), tol);
}

cplx eichler_integral(const QExpansion& f, const quad::ContourPath& path, cplx t, double tol)
{
    require_lower(t, "eichler_integral");
    if (f.is_zero())
        return 0.0;
    return quad::integrate_path(integrand(f, t, tol), path, tol);
}

cplx knopp_integral(const QExpansion& f, Endpoint z1, Endpoint z2, cplx z, double tol)
{
    if (!(z.imag() > 0))
        throw DomainError("knopp_integral: z must lie in the upper half-plane");
    return std::conj(eichler_integral(f, z1, z2, std::conj(z), tol));
}

cplx cup_representative(const QExpansion& f1, const QExpansion& f2, cplx t, double tol)
{
    require_lower(t, "cup_representative");
    if (!f2.is_cuspidal())
        throw DecayError("cup_representative: the second form must be cuspidal");
    if (f1.is_zero() || f2.is_zero())
        return 0.0;
    const cplx first = eichler_integral(f1, quad::ContourPath::rho_arc(), t, tol);
    const cplx second = eichler_integral(f2, Endpoint::point(I), Endpoint::cusp(), t, tol);
    return first * second;
}

double equivariance_residual(const QExpansion& f, const forms::MultiplierSystem& v, Generator g,
                             Endpoint z1, Endpoint z2, cplx t, double tol)
{
    if (g != Generator::S && g != Generator::T)
        throw ParameterError("equivariance_residual: g must be S or T");
    require_lower(t, "equivariance_residual");
    const cplx gt = apply(g, t);
    const cplx lhs = eichler_integral(f, apply_inverse(g, z1), apply_inverse(g, z2), t, tol);
    const std::array<Generator, 1> word{g};
    const cplx vg = forms::multiplier_value(v, word);
    // (ct + d): 1 for T, t for S
    const cplx ctd = g == Generator::T ? cplx(1.0) : t;
    const cplx factor =
        special::cpow(ctd, f.weight() - 2.0, special::ArgRange::lower_closed()) / vg;
    const cplx rhs = factor * eichler_integral(f, z1, z2, gt, tol);
    return std::abs(lhs - rhs);
}

CoinvariantDim poly_coinvariant_dim(int r, int p, CharacterConvention conv)
{
    if (r < 2 || r > 40)
        throw ParameterError("poly_coinvariant_dim: r must lie in [2, 40]");
    if ((r - p) % 2 != 0)
        throw ParameterError("poly_coinvariant_dim: p must match r modulo 2");
    const int n = r - 1;
    const forms::MultiplierSystem v{static_cast<double>(((p % 12) + 12) % 12)};
    cplx chi_T = v.on_T();
    cplx chi_S = v.on_S();
    switch (conv) {
    case CharacterConvention::literal: chi_S = 1.0 / chi_S; break;
    case CharacterConvention::direct: break;
    case CharacterConvention::inverse:
        chi_T = 1.0 / chi_T;
        chi_S = 1.0 / chi_S;
        break;
    }

    // column j holds the image of t^j
    Eigen::MatrixXcd MT = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd MS = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        double binom = 1.0;
        for (int i = 0; i <= j; ++i) {
            MT(i, j) = chi_T * binom;
            binom = binom * (j - i) / (i + 1);
        }
        MS(r - 2 - j, j) = chi_S * (j % 2 == 0 ? 1.0 : -1.0);
    }
    Eigen::MatrixXcd A(n, 2 * n);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    A << id - MS, id - MT;

    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(A).singularValues();
    const double top = sv.size() > 0 ? sv.maxCoeff() : 0.0;
    if (top == 0.0)
        return {n, 0, std::numeric_limits<double>::infinity()};
    const double threshold = 1e-9 * top;
    int rank = 0;
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < sv.size(); ++i) {
        if (sv[i] > threshold) {
            ++rank;
            margin = std::min(margin, sv[i] / threshold);
        }
        else if (sv[i] > 0) {
            margin = std::min(margin, threshold / sv[i]);
        }
    }
    if (margin < coinvariant_margin)
        throw AmbiguityError("poly_coinvariant_dim: singular value within a factor " +
                             std::to_string(margin) + " of the rank threshold at r = " +
                             std::to_string(r) + ", p = " + std::to_string(p));
    return {n - rank, rank, margin};
}

} // namespace modcup::cocycle
