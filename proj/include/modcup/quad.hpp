#pragma once

// Quadrature: Gauss rules, adaptive Gauss-Kronrod panels, endpoint-singular
// Jacobi-weighted integrals, contour paths, vertical rays and the modular
// fundamental domain.

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "modcup/special.hpp"

namespace modcup::quad {

struct JacobiWeight {
    double alpha; // exponent at the right endpoint
    double beta;  // exponent at the left endpoint
};

/// Nodes and weights on [a, b].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double a = -1.0;
    double b = 1.0;
    std::optional<JacobiWeight> jacobi;

    std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule on [-1, 1], 1 <= n <= 256.
QuadratureRule gauss_legendre(int n);

/// Gauss rule on [0, 1] for the weight u^beta (1-u)^alpha, alpha, beta > -1.
QuadratureRule gauss_jacobi(int n, double alpha, double beta);

using RealFunction = std::function<cplx(double)>;
using ComplexFunction = std::function<cplx(cplx)>;

/// Panel budget of the adaptive drivers.
inline constexpr int max_panels = 1 << 14;

struct Integral {
    cplx value;
    double error;
    int evaluations;
};

/// Adaptive 7/15-point Gauss-Kronrod integration of f over [a, b] to an
/// absolute error tol. Throws ConvergenceError past max_panels.
Integral integrate_interval(const RealFunction& f, double a, double b, double tol);

/// Integrates u^beta (1-u)^alpha g(u) over [0, 1]. Panels touching an endpoint
/// use Gauss-Jacobi rules with the singular factor in the weight; interior
/// panels use Gauss-Kronrod. Rules are built once per instance.
class SingularIntegrator {
public:
    SingularIntegrator(double alpha, double beta, int base_nodes = 8);

    Integral integrate(const RealFunction& g, double tol) const;

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

private:
    double alpha_;
    double beta_;
    QuadratureRule left_coarse_, left_fine_;   // weight s^beta on [0,1]
    QuadratureRule right_coarse_, right_fine_; // weight (1-s)^alpha
};

/// Parametrized path in the complex plane, s in [0, 1].
class ContourPath {
public:
    enum class Kind { segment, circular_arc, vertical_ray };

    /// Straight segment from a to b (a != b).
    static ContourPath segment(cplx a, cplx b);
    /// center + radius e^{i theta}, theta from theta_from to theta_to.
    static ContourPath arc(cplx center, double radius, double theta_from, double theta_to);
    /// x0 + i y, y from y0 to y_top (upward) or downward when reversed.
    static ContourPath vertical_ray(double x0, double y0, double y_top);
    /// The arc from rho - 1 = e^{2 pi i/3} to rho = e^{pi i/3} on the unit circle.
    static ContourPath rho_arc();

    Kind kind() const { return kind_; }
    cplx point(double s) const;
    cplx derivative(double s) const;
    cplx start() const { return point(0.0); }
    cplx end() const { return point(1.0); }
    ContourPath reversed() const;
    /// Pieces [0, s] and [s, 1] of the parameter range.
    std::pair<ContourPath, ContourPath> split(double s) const;

private:
    ContourPath(Kind kind, cplx p0, cplx p1, double r, double t0, double t1)
        : kind_(kind), p0_(p0), p1_(p1), radius_(r), t0_(t0), t1_(t1)
    {}

    Kind kind_;
    cplx p0_;       // segment start, arc center, ray base (x0 + i*0)
    cplx p1_;       // segment end
    double radius_; // arc radius
    double t0_, t1_; // arc angles or ray heights
};

/// integral of f(z) dz along the path.
cplx integrate_path(const ComplexFunction& f, const ContourPath& path, double tol);

struct RayIntegral {
    cplx value;
    double truncation_height;
    double error;
};

/// integral of f(z) dz over z = x0 + i y, y from y0 to infinity, for
/// |f(x0 + i y)| <= C e^{-decay_rate y}. C is estimated from samples with a
/// safety factor 10; the range is cut where the remaining mass is below tol/2.
/// Throws DecayError when samples beyond the fitting window break the bound.
RayIntegral integrate_vertical_ray_ex(const ComplexFunction& f, double x0, double y0,
                                      double decay_rate, double tol);
cplx integrate_vertical_ray(const ComplexFunction& f, double x0, double y0, double decay_rate,
                            double tol);

/// Integrand over the plane, g(x, y).
using PlaneFunction = std::function<cplx(double, double)>;

/// integral of g dx dy over {|x| <= 1/2, x^2 + y^2 >= 1}. The y-range
/// [sqrt(1-x^2), inf) is mapped to (0, 1] by y = sqrt(1-x^2)/s, which covers
/// exponentially and algebraically (faster than y^-1) decaying integrands.
cplx integrate_fundamental_domain(const PlaneFunction& g, double tol);

} // namespace modcup::quad
