#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "modcup/error.hpp"
#include "modcup/quad.hpp"

using namespace modcup;
using namespace modcup::quad;

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx I(0.0, 1.0);

// tanh-sinh trapezoid for u^beta (1-u)^alpha g(u); u and 1-u are formed
// separately so the endpoint factors keep full relative precision
template <typename G>
double tanh_sinh_weighted(G g, double alpha, double beta)
{
    const double h = 1.0 / 64;
    double s = 0.0;
    for (int k = -64 * 6; k <= 64 * 6; ++k) {
        const double t = k * h;
        const double e = pi / 2 * std::sinh(t);
        const double u = 1 / (1 + std::exp(-2 * e)), v = 1 / (1 + std::exp(2 * e));
        const double du = pi / 2 * std::cosh(t) * 2 * u * v;
        if (u <= 0 || v <= 0)
            continue;
        s += std::pow(u, beta) * std::pow(v, alpha) * g(u) * du;
    }
    return s * h;
}

double simpson(const std::function<double(double)>& f, double a, double b, int panels)
{
    const double step = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i)
        s += f(a + i * step) * (i % 2 ? 4 : 2);
    return s * step / 3;
}

} // namespace

TEST_CASE("Gauss-Legendre integrates polynomials exactly")
{
    for (int n : {1, 2, 5, 8, 20, 64}) {
        const auto rule = gauss_legendre(n);
        REQUIRE(rule.size() == static_cast<std::size_t>(n));
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < rule.size(); ++i)
                s += rule.weights[i] * std::pow(rule.nodes[i], k);
            const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
            CAPTURE(n);
            CAPTURE(k);
            CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
        }
    }
    CHECK_THROWS_AS(gauss_legendre(0), ParameterError);
}

TEST_CASE("Gauss-Jacobi moments")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> exponent(-0.9, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = exponent(rng), b = exponent(rng);
        const auto rule = gauss_jacobi(8, a, b);
        REQUIRE(rule.jacobi.has_value());
        for (int k = 0; k <= 15; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < rule.size(); ++i)
                s += rule.weights[i] * std::pow(rule.nodes[i], k);
            const double exact =
                std::tgamma(b + k + 1) * std::tgamma(a + 1) / std::tgamma(a + b + k + 2);
            CHECK(s == doctest::Approx(exact).epsilon(1e-12));
        }
        for (double x : rule.nodes) {
            CHECK(x > 0.0);
            CHECK(x < 1.0);
        }
    }
    CHECK_THROWS_AS(gauss_jacobi(8, -1.0, 0.0), ParameterError);
}

TEST_CASE("adaptive Gauss-Kronrod")
{
    const auto r = integrate_interval([](double x) { return cplx(std::exp(x), std::cos(x)); }, 0.0,
                                      2.0, 1e-13);
    CHECK(std::abs(r.value - cplx(std::exp(2.0) - 1.0, std::sin(2.0))) < 1e-13);
    CHECK(r.error <= 1e-13);

    // reversed limits flip the sign
    const auto rev = integrate_interval([](double x) { return cplx(x * x); }, 1.0, 0.0, 1e-14);
    CHECK(rev.value.real() == doctest::Approx(-1.0 / 3).epsilon(1e-14));

    // peaked integrand
    const auto peak = integrate_interval(
        [](double x) { return cplx(1.0 / (1e-4 + (x - 0.3) * (x - 0.3))); }, 0.0, 1.0, 1e-10);
    const double exact = (std::atan(0.7 / 1e-2) + std::atan(0.3 / 1e-2)) / 1e-2;
    CHECK(peak.value.real() == doctest::Approx(exact).epsilon(1e-11));

    // far more oscillations than the panel budget can resolve
    CHECK_THROWS_AS(
        integrate_interval([](double x) { return cplx(std::cos(4e6 * x)); }, 0.0, 1.0, 1e-12),
        ConvergenceError);
}

TEST_CASE("endpoint-singular integrals against a Simpson oracle")
{
    for (auto [alpha, beta] : {std::pair{-0.5, 0.3}, std::pair{1.4, -0.8}, std::pair{0.7, 0.7}}) {
        const SingularIntegrator integ(alpha, beta);
        auto g = [](double u) { return std::cos(3 * u) / (1.2 + u); };
        const auto r = integ.integrate([&](double u) { return cplx(g(u)); }, 1e-13);
        const double oracle = tanh_sinh_weighted(g, alpha, beta);
        CAPTURE(alpha);
        CAPTURE(beta);
        CHECK(r.value.real() == doctest::Approx(oracle).epsilon(1e-12));
    }
    // the weight alone integrates to the beta function
    const SingularIntegrator integ(0.4, -0.6);
    const auto mass = integ.integrate([](double) { return cplx(1.0); }, 1e-14);
    CHECK(mass.value.real() ==
          doctest::Approx(std::tgamma(0.4) * std::tgamma(1.4) / std::tgamma(1.8)).epsilon(1e-13));
}

TEST_CASE("contour paths")
{
    const auto circle = ContourPath::arc(0.0, 1.0, 0.0, 2 * pi);
    CHECK(std::abs(integrate_path([](cplx z) { return 1.0 / z; }, circle, 1e-13) - 2 * pi * I) <
          1e-12);
    const auto seg = ContourPath::segment(cplx(0.0, 1.0), cplx(1.0, 2.0));
    const cplx expected = (std::pow(cplx(1.0, 2.0), 3) - std::pow(cplx(0.0, 1.0), 3)) / 3.0;
    CHECK(std::abs(integrate_path([](cplx z) { return z * z; }, seg, 1e-13) - expected) < 1e-13);
    CHECK(std::abs(integrate_path([](cplx z) { return z * z; }, seg.reversed(), 1e-13) +
                   expected) < 1e-13);

    const auto [left, right] = seg.split(0.25);
    CHECK(std::abs(left.end() - right.start()) < 1e-15);
    CHECK(std::abs(left.start() - seg.start()) < 1e-15);

    const auto arc = ContourPath::rho_arc();
    CHECK(std::abs(arc.start() - std::polar(1.0, 2 * pi / 3)) < 1e-15);
    CHECK(std::abs(arc.end() - std::polar(1.0, pi / 3)) < 1e-15);
    // holomorphic integrand: arc and chord agree
    auto f = [](cplx z) { return std::exp(cplx(0.0, 2 * pi) * z); };
    const cplx via_arc = integrate_path(f, arc, 1e-13);
    const cplx via_chord = integrate_path(f, ContourPath::segment(arc.start(), arc.end()), 1e-13);
    CHECK(std::abs(via_arc - via_chord) < 1e-12);

    CHECK_THROWS_AS(ContourPath::arc(0.0, 0.0, 0.0, 1.0), ParameterError);
}

TEST_CASE("vertical rays")
{
    // int_i^{i inf} e^{2 pi i z} dz = i e^{-2 pi}/(2 pi)
    const auto r = integrate_vertical_ray_ex([](cplx z) { return std::exp(cplx(0.0, 2 * pi) * z); },
                                             0.0, 1.0, 2 * pi, 1e-14);
    CHECK(std::abs(r.value - I * std::exp(-2 * pi) / (2 * pi)) < 1e-14);
    CHECK(r.truncation_height > 1.0);

    const cplx shifted = integrate_vertical_ray(
        [](cplx z) { return std::exp(cplx(0.0, 2 * pi * 0.35) * z) * z; }, 0.3, 0.9, 2 * pi * 0.3,
        1e-12);
    // antiderivative of z e^{az}: e^{az}(z/a - 1/a^2)
    const cplx a(0.0, 2 * pi * 0.35), z0(0.3, 0.9);
    const cplx exact = -std::exp(a * z0) * (z0 / a - 1.0 / (a * a));
    CHECK(std::abs(shifted - exact) < 1e-11);

    CHECK_THROWS_AS(
        integrate_vertical_ray([](cplx z) { return std::exp(0.5 * z.imag()) + 0.0 * z; }, 0.0, 1.0,
                               1.0, 1e-10),
        DecayError);
    CHECK_THROWS_AS(integrate_vertical_ray([](cplx) { return cplx(1.0); }, 0.0, 1.0, 0.0, 1e-10),
                    ParameterError);
}

TEST_CASE("fundamental domain")
{
    const cplx area =
        integrate_fundamental_domain([](double, double y) { return cplx(1.0 / (y * y)); }, 1e-11);
    CHECK(std::abs(area - pi / 3) < 1e-9);

    // e^{-y}: the y-integral reduces to e^{-sqrt(1-x^2)}
    const cplx decaying =
        integrate_fundamental_domain([](double, double y) { return cplx(std::exp(-y)); }, 1e-12);
    const double oracle =
        simpson([](double x) { return std::exp(-std::sqrt(1 - x * x)); }, -0.5, 0.5, 20000);
    CHECK(decaying.real() == doctest::Approx(oracle).epsilon(1e-11));
}

TEST_CASE("worked examples and path properties")
{
    // f(iy) = e^{-y} from y0 = 1
    const cplx ray = integrate_vertical_ray([](cplx z) { return std::exp(I * z); }, 0.0, 1.0, 1.0,
                                            1e-13);
    CHECK(std::abs(ray - I * std::exp(-1.0)) < 1e-13);

    const auto arc = ContourPath::rho_arc();
    const cplx rho = arc.end(), rho1 = arc.start();
    const cplx zdz = integrate_path([](cplx z) { return z; }, arc, 1e-14);
    CHECK(std::abs(zdz - (rho * rho - rho1 * rho1) / 2.0) < 1e-14);

    // additivity over a split and exact orientation reversal
    auto g = [](cplx z) { return std::conj(z) * std::exp(z); };
    const double tol = 1e-12;
    const cplx whole = integrate_path(g, arc, tol);
    const auto [a, b] = arc.split(0.37);
    CHECK(std::abs(whole - integrate_path(g, a, tol) - integrate_path(g, b, tol)) <= 2 * tol);
    CHECK(integrate_path(g, arc.reversed(), tol) == -whole);

    const cplx dom = integrate_fundamental_domain(
        [](double, double y) { return cplx(std::exp(-2 * pi * y)); }, 1e-12);
    const double oracle = simpson(
        [](double x) { return std::exp(-2 * pi * std::sqrt(1 - x * x)) / (2 * pi); }, -0.5, 0.5,
        20000);
    CHECK(dom.real() == doctest::Approx(oracle).epsilon(1e-10));
}
