#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "modcup/error.hpp"
#include "modcup/polar.hpp"

using namespace modcup;
using namespace modcup::polar;

namespace {

constexpr cplx I(0.0, 1.0);

} // namespace

TEST_CASE("disk coordinate round trip")
{
    for (cplx z : {cplx(0.0, 1.0), cplx(0.3, 0.4), cplx(-2.0, 5.0)}) {
        const cplx w = disk_coordinate(z);
        CHECK(std::abs(w) < 1.0);
        CHECK(std::abs(from_disk(w) - z) < 1e-14 * std::max(1.0, std::abs(z)));
    }
    CHECK(std::abs(disk_coordinate(I)) == 0.0);
}

TEST_CASE("series bookkeeping")
{
    const PolarSeries a(-2, {1.0, 2.0, 3.0});
    CHECK(a.n_min() == -2);
    CHECK(a.n_max() == 0);
    CHECK(a.is_minus());
    CHECK_FALSE(a.is_plus());
    CHECK(a.coeff(-1) == cplx(2.0));
    CHECK(a.coeff(5) == cplx(0.0));
    const cplx w(0.3, 0.2);
    CHECK(std::abs(a.evaluate(w) - (1.0 / (w * w) + 2.0 / w + 3.0)) < 1e-13);
    const auto b = a + PolarSeries::monomial(2, 4.0);
    CHECK(b.coeff(2) == cplx(4.0));
    CHECK(b.coeff(-2) == cplx(1.0));
    CHECK((a * 2.0).coeff(0) == cplx(6.0));
}

TEST_CASE("sigma_r and J_r are inverse on minus parts")
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    for (double r : {0.37, 1.5, 3.2, -1.7}) {
        std::vector<cplx> c(41);
        for (auto& x : c)
            x = cplx(gauss(rng), gauss(rng));
        const PolarSeries f(-40, c);
        const auto lifted = sigma_r_coeff(f, r);
        CHECK(lifted.n_min() == -41);
        CHECK(lifted.n_max() == -1);
        const auto back = j_r(lifted, r);
        for (int n = -40; n <= 0; ++n)
            CHECK(std::abs(back.coeff(n) - f.coeff(n)) <= 1e-14 * std::abs(f.coeff(n)));
    }
    // explicit values: sigma_r w^{-2} = 2/(r (r+1)) w^{-3}
    const auto s = sigma_r_coeff(PolarSeries::monomial(-2), 0.5);
    CHECK(s.coeff(-3).real() == doctest::Approx(2.0 / (0.5 * 1.5)));
    CHECK(j_r(PolarSeries::monomial(3), 0.5).coeff(4) == cplx(0.0));
}

TEST_CASE("poles of the lift")
{
    // (r)_k vanishes for k > -r when r is a non-positive integer
    CHECK_THROWS_AS(sigma_r_coeff(PolarSeries::monomial(-4), -2.0), PoleError);
    CHECK_NOTHROW(sigma_r_coeff(PolarSeries::monomial(-2), -2.0));
    CHECK_THROWS_AS(sigma_r_coeff(PolarSeries::monomial(1), 0.5), ParameterError);
    CHECK_THROWS_AS(bracket(PolarSeries::monomial(4), PolarSeries::monomial(-4), -1.0), PoleError);
}

TEST_CASE("hypergeometric series closed forms")
{
    const cplx x(0.4, -0.3);
    CHECK(std::abs(hypergeometric_11r(x, 1.0) - 1.0 / (1.0 - x)) < 1e-14);
    CHECK(std::abs(hypergeometric_11r(x, 2.0) + std::log(1.0 - x) / x) < 1e-14);
    CHECK_THROWS_AS(hypergeometric_11r(0.995, 1.0), DomainError);
    CHECK_THROWS_AS(hypergeometric_11r(0.5, -1.0), PoleError);
}

TEST_CASE("contour form of sigma_r agrees with the coefficient form")
{
    const cplx z = from_disk(std::polar(0.75, -1.1));
    const cplx w = disk_coordinate(z);
    for (double r : {0.6, 1.9}) {
        for (int n : {0, -1, -4}) {
            const cplx coeff = sigma_r_coeff(PolarSeries::monomial(n), r).evaluate(w);
            const cplx contour = sigma_r_contour(
                [n](cplx tau) { return std::pow(disk_coordinate(tau), n); }, r, z, 0.45);
            CHECK(std::abs(contour - coeff) < 1e-11 * std::abs(coeff));
        }
    }
    CHECK_THROWS_AS(sigma_r_contour([](cplx) { return cplx(1.0); }, 0.5, I, 0.5), ParameterError);
    CHECK_THROWS_AS(sigma_r_contour([](cplx) { return cplx(1.0); }, 0.5, from_disk(0.5), 0.499),
                    DomainError);
}

TEST_CASE("bracket of monomials and its tail estimate")
{
    // [w^n, w^-n]_r = n!/(r)_n
    const auto b = bracket(PolarSeries::monomial(3), PolarSeries::monomial(-3), 0.5);
    CHECK(b.value.real() == doctest::Approx(6.0 / (0.5 * 1.5 * 2.5)));
    CHECK(b.tail_estimate == 0.0);
    CHECK(bracket(PolarSeries::monomial(2), PolarSeries::monomial(-3), 0.5).value == cplx(0.0));
    CHECK(std::abs(lifted_pairing(PolarSeries::monomial(2),
                                  sigma_r_coeff(PolarSeries::monomial(-2), 0.5)) -
                   bracket(PolarSeries::monomial(2), PolarSeries::monomial(-2), 0.5).value) <
          1e-15);
}

TEST_CASE("kernel bracket identity")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const cplx u1 = std::polar(0.6 * std::sqrt(unit(rng)), 6.283 * unit(rng));
        const cplx u2 = std::polar(0.6 * std::sqrt(unit(rng)), 6.283 * unit(rng));
        const cplx tau1 = from_disk(u1), tau2 = from_disk(u2);
        const double r = 0.05 + 1.9 * unit(rng);
        const int N = kernel_truncation(tau1, tau2, 1e-17);
        // direct evaluation of the kernels against their expansions
        const cplx z = from_disk(std::polar(0.3, 0.4));
        const cplx w = disk_coordinate(z);
        const auto q = eichler_kernel_minus_expansion(tau1, r, N);
        const auto p = knopp_kernel_plus_expansion(tau2, r, N);
        const cplx pz = std::pow((std::conj(tau2) - z) / (-I - z), r - 2);
        CHECK(std::abs(p.evaluate(w) - pz) < 1e-12 * std::abs(pz));
        const auto b = bracket(p, q, 2.0 - r);
        const cplx exact = bracket_closed_form(tau1, tau2, r);
        CHECK(std::abs(b.value - exact) < 1e-10 * std::abs(exact));
    }
    CHECK(kernel_truncation(I, I, 1e-10) == 20);
}
