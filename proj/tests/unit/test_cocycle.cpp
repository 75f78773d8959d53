#include <doctest.h>

#include <cmath>
#include <numbers>

#include "modcup/cocycle.hpp"
#include "modcup/error.hpp"
#include "modcup/forms.hpp"

using namespace modcup;
using namespace modcup::cocycle;

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx I(0.0, 1.0);
const cplx rho = std::polar(1.0, pi / 3);

} // namespace

TEST_CASE("Eichler integral basics")
{
    const auto f = forms::eta_power_expansion(0.6, 40);
    const cplx t(0.2, -1.0);
    const auto a = Endpoint::point(I);
    CHECK(eichler_integral(f, a, a, t, 1e-12) == cplx(0.0));

    const auto b = Endpoint::point({0.3, 1.2});
    const auto c = Endpoint::point({-0.4, 0.9});
    const cplx ab = eichler_integral(f, a, b, t, 1e-12);
    const cplx bc = eichler_integral(f, b, c, t, 1e-12);
    const cplx ac = eichler_integral(f, a, c, t, 1e-12);
    CHECK(std::abs(ac - ab - bc) < 1e-11);
    CHECK(std::abs(eichler_integral(f, b, a, t, 1e-12) + ab) < 1e-12);

    // additivity through the cusp
    const cplx a_inf = eichler_integral(f, a, Endpoint::cusp(), t, 1e-12);
    const cplx b_inf = eichler_integral(f, b, Endpoint::cusp(), t, 1e-12);
    CHECK(std::abs(a_inf - b_inf - ab) < 1e-11);

    const CocycleValue cv(f, a, b, 1e-12);
    CHECK(cv(t) == ab);
    CHECK(cv.weight() == 0.6);
}

TEST_CASE("path independence for a holomorphic integrand")
{
    const auto f = forms::eta_power_expansion(1.2, 40);
    const cplx t(0.1, -0.8);
    const cplx chord = eichler_integral(f, Endpoint::point(rho - 1.0), Endpoint::point(rho), t,
                                        1e-12);
    const cplx via_i = eichler_integral(f, Endpoint::point(rho - 1.0), Endpoint::point(I), t,
                                        1e-12) +
                       eichler_integral(f, Endpoint::point(I), Endpoint::point(rho), t, 1e-12);
    const cplx arc = eichler_integral(f, quad::ContourPath::rho_arc(), t, 1e-12);
    CHECK(std::abs(chord - via_i) < 1e-11);
    CHECK(std::abs(chord - arc) < 1e-11);
}

TEST_CASE("Knopp integral is the conjugated Eichler integral")
{
    const auto f = forms::eta_power_expansion(0.8, 40);
    const auto a = Endpoint::point({0.1, 1.0});
    const auto b = Endpoint::point({-0.2, 1.4});
    const cplx z(0.3, 0.7);
    const cplx k = knopp_integral(f, a, b, z, 1e-12);
    // direct quadrature of conj(f(tau)) (conj(tau) - z)^{r-2} d conj(tau) on the segment
    const cplx za = a.z, zb = b.z;
    const auto seg = quad::integrate_interval(
        [&](double s) {
            const cplx tau = za + s * (zb - za);
            return std::conj(f(tau)) *
                   special::cpow(std::conj(tau) - z, 0.8 - 2, special::ArgRange::lower_closed()) *
                   std::conj(zb - za);
        },
        0.0, 1.0, 1e-13);
    CHECK(std::abs(k - seg.value) < 1e-12 * std::abs(k));
}

TEST_CASE("cup representative")
{
    const auto f1 = forms::eta_power_expansion(-0.7, 40);
    const auto f2 = forms::eta_power_expansion(0.2, 40);
    const auto zero = forms::QExpansion(-0.7, -0.7, {0.0});
    const cplx t(0.25, -1.1);
    CHECK(std::abs(cup_representative(zero, f2, t, 1e-12)) == 0.0);

    const cplx base = cup_representative(f1, f2, t, 1e-11);
    const cplx halved = cup_representative(f1, f2, t, 5e-12);
    CHECK(std::abs(base - halved) < 1e-10 * std::abs(base));

    const cplx scaled = cup_representative(f1.scaled(2.5), f2, t, 1e-11);
    CHECK(std::abs(scaled - 2.5 * base) < 1e-10 * std::abs(base));
    const cplx scaled2 = cup_representative(f1, f2.scaled(-3.0), t, 1e-11);
    CHECK(std::abs(scaled2 + 3.0 * base) < 1e-10 * std::abs(base));
}

TEST_CASE("equivariance under T and S")
{
    const auto f = forms::eta_power_expansion(0.6, 60);
    const auto z1 = Endpoint::point(I), z2 = Endpoint::point(2.0 * I);
    const cplx t(-1.0, -1.0);
    CHECK(equivariance_residual(f, f.multiplier(), forms::Generator::T, z1, z2, t, 1e-12) < 1e-10);
    CHECK(equivariance_residual(f, f.multiplier(), forms::Generator::S, z1, z2, t, 1e-12) < 1e-10);
    CHECK(equivariance_residual(f, f.multiplier(), forms::Generator::T, z1, Endpoint::cusp(), t,
                                1e-12) < 1e-10);
    // the wrong multiplier is detected
    const forms::MultiplierSystem wrong{3.6};
    CHECK(equivariance_residual(f, wrong, forms::Generator::T, z1, z2, t, 1e-12) > 1e-4);
    CHECK_THROWS_AS(equivariance_residual(f, f.multiplier(), forms::Generator::S, z1,
                                          Endpoint::cusp(), t, 1e-12),
                    ParameterError);
}

TEST_CASE("integral weight gives polynomials of degree r-2")
{
    const auto f = forms::eta_power_expansion(4.0, 40);
    const auto z1 = Endpoint::point(I), z2 = Endpoint::point({0.2, 1.3});
    // third differences vanish for a quadratic
    const cplx h(0.3, 0.0), t0(-0.4, -1.0);
    cplx d3 = 0.0;
    const int binom[4] = {1, -3, 3, -1};
    for (int k = 0; k < 4; ++k)
        d3 += double(binom[k]) * eichler_integral(f, z1, z2, t0 + double(k) * h, 1e-12);
    const cplx scale = eichler_integral(f, z1, z2, t0, 1e-12);
    CHECK(std::abs(d3) < 1e-10 * std::abs(scale));
}

TEST_CASE("non-cusp forms at the cusp")
{
    const auto e4 = forms::e4_expansion(20);
    CHECK_THROWS_AS(eichler_integral(e4, Endpoint::point(I), Endpoint::cusp(), cplx(0.0, -1.0),
                                     1e-10),
                    DecayError);
    CHECK_NOTHROW(eichler_integral(e4, Endpoint::point(I), Endpoint::point(2.0 * I),
                                   cplx(0.0, -1.0), 1e-10));
}

TEST_CASE("polynomial coinvariants")
{
    CHECK(poly_coinvariant_dim(2, 0).dim == 1);
    CHECK(poly_coinvariant_dim(2, 12).dim == 1);
    CHECK(poly_coinvariant_dim(2, 2).dim == 0);
    CHECK(poly_coinvariant_dim(12, 0).dim == 0);
    CHECK(poly_coinvariant_dim(3, 1).dim == 0);
    for (int r = 2; r <= 10; ++r) {
        for (int p = r % 2; p <= 12; p += 2) {
            const auto lit = poly_coinvariant_dim(r, p, CharacterConvention::literal);
            CHECK(lit.margin >= coinvariant_margin);
            CHECK(lit.dim + lit.rank == r - 1);
            CHECK(poly_coinvariant_dim(r, p, CharacterConvention::direct).dim == lit.dim);
            CHECK(poly_coinvariant_dim(r, p, CharacterConvention::inverse).dim == lit.dim);
        }
    }
    CHECK_THROWS_AS(poly_coinvariant_dim(3, 0), ParameterError);
    CHECK_THROWS_AS(poly_coinvariant_dim(1, 1), ParameterError);
    CHECK_THROWS_AS(poly_coinvariant_dim(41, 1), ParameterError);
}
