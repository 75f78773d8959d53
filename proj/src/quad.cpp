#include "modcup/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include <Eigen/Eigenvalues>

#include "modcup/error.hpp"

namespace modcup::quad {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

// Kronrod abscissae on [0,1) of [-1,1], descending; odd indices are the
// 7-point Gauss nodes.
constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
    cplx value;
    double error;
    double abs_mass; // integral of |f|, for the roundoff floor
};

PanelEstimate gk15(const RealFunction& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const cplx fc = f(c);
    cplx kronrod = wgk[7] * fc;
    cplx gauss = wg[3] * fc;
    double mass = wgk[7] * std::abs(fc);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const cplx f1 = f(c - dx);
        const cplx f2 = f(c + dx);
        kronrod += wgk[j] * (f1 + f2);
        mass += wgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1)
            gauss += wg[j / 2] * (f1 + f2);
    }
    return {kronrod * h, std::abs(kronrod - gauss) * h, mass * h};
}

struct Panel {
    double a, b;
    int kind; // 0 interior, 1 touches 0, 2 touches 1
    PanelEstimate est;
    bool operator<(const Panel& other) const { return est.error < other.est.error; }
};

template <typename Evaluate, typename Split>
Integral run_adaptive(std::vector<Panel> initial, double tol, Evaluate&& evaluate, Split&& split,
                      int evals_per_panel, const char* who)
{
    std::priority_queue<Panel> heap;
    double error = 0.0;
    double mass = 0.0;
    int evaluations = 0;
    for (auto& p : initial) {
        p.est = evaluate(p);
        evaluations += evals_per_panel;
        error += p.est.error;
        mass += p.est.abs_mass;
        heap.push(p);
    }
    int panels = static_cast<int>(heap.size());
    const auto target = [&] { return std::max(tol, 64 * eps * mass); };
    int since_resum = 0;
    while (error > target()) {
        Panel worst = heap.top();
        if (worst.b - worst.a <= 8 * eps * std::max(1.0, std::abs(worst.a) + std::abs(worst.b)))
            break; // cannot refine further in binary64
        if (panels >= max_panels)
            throw ConvergenceError(std::string(who) + ": panel budget exhausted (error " +
                                   std::to_string(error) + ", tolerance " + std::to_string(tol) +
                                   ")");
        heap.pop();
        error -= worst.est.error;
        mass -= worst.est.abs_mass;
        for (Panel child : split(worst)) {
            child.est = evaluate(child);
            evaluations += evals_per_panel;
            error += child.est.error;
            mass += child.est.abs_mass;
            heap.push(child);
        }
        ++panels;
        if (++since_resum == 200) {
            // clear accumulated drift in the running sums
            since_resum = 0;
            auto copy = heap;
            error = 0.0;
            mass = 0.0;
            while (!copy.empty()) {
                error += copy.top().est.error;
                mass += copy.top().est.abs_mass;
                copy.pop();
            }
        }
    }
    // final sum over panels in a fixed order
    std::vector<Panel> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    special::CompensatedComplexSum sum;
    double err = 0.0;
    for (const auto& p : all) {
        sum += p.est.value;
        err += p.est.error;
    }
    return {sum.value(), err, evaluations};
}

PanelEstimate apply_rule(const QuadratureRule& coarse, const QuadratureRule& fine,
                         const RealFunction& f, double scale)
{
    cplx qc = 0.0, qf = 0.0;
    double mass = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i)
        qc += coarse.weights[i] * f(coarse.nodes[i]);
    for (std::size_t i = 0; i < fine.size(); ++i) {
        const cplx v = f(fine.nodes[i]);
        qf += fine.weights[i] * v;
        mass += fine.weights[i] * std::abs(v);
    }
    return {qf * scale, std::abs(qf - qc) * scale, mass * scale};
}

} // namespace

QuadratureRule gauss_legendre(int n)
{
    if (n < 1 || n > 256)
        throw ParameterError("gauss_legendre: n must be in [1, 256]");
    QuadratureRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    if (n == 1) {
        rule.weights[0] = 2.0;
        return rule;
    }
    // Newton on P_n from the Tricomi initial guesses; symmetric pairs
    for (int i = 0; i < n / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        // middle node at 0: w = 2 / P_n'(0)^2
        double p0 = 1.0, p1 = 0.0, dp0 = 0.0, dp1 = 1.0;
        for (int k = 2; k <= n; ++k) {
            const double p2 = (-(k - 1.0) * p0) / k;
            const double dp2 = ((2.0 * k - 1.0) * p1 - (k - 1.0) * dp0) / k;
            p0 = p1;
            p1 = p2;
            dp0 = dp1;
            dp1 = dp2;
        }
        rule.weights[n / 2] = 2.0 / (dp1 * dp1);
    }
    return rule;
}

QuadratureRule gauss_jacobi(int n, double alpha, double beta)
{
    if (n < 1 || n > 256)
        throw ParameterError("gauss_jacobi: n must be in [1, 256]");
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw ParameterError("gauss_jacobi: alpha and beta must exceed -1");
    // Golub-Welsch on [-1,1] with weight (1-x)^a (1+x)^b, then u = (1+x)/2.
    const double a = alpha, b = beta;
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(std::max(n - 1, 1));
    diag(0) = (b - a) / (a + b + 2.0);
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + a + b;
        diag(k) = (b * b - a * a) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + a + b;
        double v;
        if (k == 1)
            v = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b));
        else
            v = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
        sub(k - 1) = std::sqrt(v);
    }
    const double mass = special::beta(beta + 1.0, alpha + 1.0);
    QuadratureRule rule;
    rule.a = 0.0;
    rule.b = 1.0;
    rule.jacobi = JacobiWeight{alpha, beta};
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = 0.5 * (1.0 + diag(0));
        rule.weights[0] = mass;
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
    const auto& values = solver.eigenvalues();
    const auto& vectors = solver.eigenvectors();
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = 0.5 * (1.0 + values(i));
        const double v0 = vectors(0, i);
        rule.weights[i] = mass * v0 * v0;
    }
    return rule;
}

Integral integrate_interval(const RealFunction& f, double a, double b, double tol)
{
    if (a == b)
        return {0.0, 0.0, 0};
    const double sign = b > a ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    auto evaluate = [&](const Panel& p) { return gk15(f, p.a, p.b); };
    auto split = [](const Panel& p) {
        const double m = 0.5 * (p.a + p.b);
        return std::array<Panel, 2>{Panel{p.a, m, 0, {}}, Panel{m, p.b, 0, {}}};
    };
    Integral out = run_adaptive({Panel{lo, hi, 0, {}}}, tol, evaluate, split, 15,
                                "integrate_interval");
    out.value *= sign;
    return out;
}

SingularIntegrator::SingularIntegrator(double alpha, double beta, int base_nodes)
    : alpha_(alpha), beta_(beta),
      left_coarse_(gauss_jacobi(base_nodes, 0.0, beta)),
      left_fine_(gauss_jacobi(2 * base_nodes + 1, 0.0, beta)),
      right_coarse_(gauss_jacobi(base_nodes, 0.0, alpha)),
      right_fine_(gauss_jacobi(2 * base_nodes + 1, 0.0, alpha))
{}

Integral SingularIntegrator::integrate(const RealFunction& g, double tol) const
{
    const double al = alpha_, be = beta_;
    auto evaluate = [&](const Panel& p) -> PanelEstimate {
        if (p.kind == 1) {
            // int_0^h u^beta (1-u)^alpha g(u) du = h^{beta+1} int_0^1 s^beta F(hs) ds
            const double h = p.b;
            RealFunction F = [&](double s) {
                const double u = h * s;
                return std::pow(1.0 - u, al) * g(u);
            };
            return apply_rule(left_coarse_, left_fine_, F, std::pow(h, be + 1.0));
        }
        if (p.kind == 2) {
            const double h = 1.0 - p.a;
            RealFunction G = [&](double s) {
                const double u = 1.0 - h * s;
                return std::pow(u, be) * g(u);
            };
            return apply_rule(right_coarse_, right_fine_, G, std::pow(h, al + 1.0));
        }
        RealFunction full = [&](double u) {
            return std::pow(u, be) * std::pow(1.0 - u, al) * g(u);
        };
        return gk15(full, p.a, p.b);
    };
    auto split = [](const Panel& p) {
        const double m = 0.5 * (p.a + p.b);
        if (p.kind == 1)
            return std::array<Panel, 2>{Panel{p.a, m, 1, {}}, Panel{m, p.b, 0, {}}};
        if (p.kind == 2)
            return std::array<Panel, 2>{Panel{p.a, m, 0, {}}, Panel{m, p.b, 2, {}}};
        return std::array<Panel, 2>{Panel{p.a, m, 0, {}}, Panel{m, p.b, 0, {}}};
    };
    const int per_panel = static_cast<int>(left_coarse_.size() + left_fine_.size());
    return run_adaptive({Panel{0.0, 0.5, 1, {}}, Panel{0.5, 1.0, 2, {}}}, tol, evaluate, split,
                        per_panel, "SingularIntegrator");
}

ContourPath ContourPath::segment(cplx a, cplx b)
{
    if (a == b)
        throw ParameterError("ContourPath::segment: endpoints must differ");
    return ContourPath(Kind::segment, a, b, 0.0, 0.0, 0.0);
}

ContourPath ContourPath::arc(cplx center, double radius, double theta_from, double theta_to)
{
    if (!(radius > 0))
        throw ParameterError("ContourPath::arc: radius must be positive");
    return ContourPath(Kind::circular_arc, center, center, radius, theta_from, theta_to);
}

ContourPath ContourPath::vertical_ray(double x0, double y0, double y_top)
{
    if (!(y_top > 0) || y_top == y0)
        throw ParameterError("ContourPath::vertical_ray: truncation height must be positive "
                             "and differ from the base");
    return ContourPath(Kind::vertical_ray, cplx(x0, 0.0), cplx(x0, 0.0), 0.0, y0, y_top);
}

ContourPath ContourPath::rho_arc()
{
    return arc(0.0, 1.0, 2 * std::numbers::pi / 3, std::numbers::pi / 3);
}

cplx ContourPath::point(double s) const
{
    switch (kind_) {
    case Kind::segment: return p0_ + s * (p1_ - p0_);
    case Kind::circular_arc: return p0_ + std::polar(radius_, t0_ + s * (t1_ - t0_));
    case Kind::vertical_ray: return cplx(p0_.real(), t0_ + s * (t1_ - t0_));
    }
    return 0.0;
}

cplx ContourPath::derivative(double s) const
{
    switch (kind_) {
    case Kind::segment: return p1_ - p0_;
    case Kind::circular_arc: {
        const double theta = t0_ + s * (t1_ - t0_);
        return cplx(0.0, 1.0) * std::polar(radius_, theta) * (t1_ - t0_);
    }
    case Kind::vertical_ray: return cplx(0.0, t1_ - t0_);
    }
    return 0.0;
}

ContourPath ContourPath::reversed() const
{
    ContourPath out = *this;
    if (kind_ == Kind::segment)
        std::swap(out.p0_, out.p1_);
    else
        std::swap(out.t0_, out.t1_);
    return out;
}

std::pair<ContourPath, ContourPath> ContourPath::split(double s) const
{
    ContourPath first = *this, second = *this;
    if (kind_ == Kind::segment) {
        const cplx mid = point(s);
        first.p1_ = mid;
        second.p0_ = mid;
    } else {
        const double mid = t0_ + s * (t1_ - t0_);
        first.t1_ = mid;
        second.t0_ = mid;
    }
    return {first, second};
}

cplx integrate_path(const ComplexFunction& f, const ContourPath& path, double tol)
{
    RealFunction g = [&](double s) { return f(path.point(s)) * path.derivative(s); };
    return integrate_interval(g, 0.0, 1.0, tol).value;
}

RayIntegral integrate_vertical_ray_ex(const ComplexFunction& f, double x0, double y0,
                                      double decay_rate, double tol)
{
    if (!(decay_rate > 0))
        throw ParameterError("integrate_vertical_ray: decay rate must be positive");
    const double step = 0.5 / decay_rate;
    auto sample = [&](double y) { return std::abs(f(cplx(x0, y))); };

    // fit C on the first eight samples, then check the next eight
    double C = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double y = y0 + j * step;
        C = std::max(C, sample(y) * std::exp(decay_rate * (y - y0)));
    }
    C *= 10.0;
    auto check = [&](double y) {
        if (sample(y) > C * std::exp(-decay_rate * (y - y0)))
            throw DecayError("integrate_vertical_ray: integrand at height " + std::to_string(y) +
                             " exceeds the fitted bound for decay rate " +
                             std::to_string(decay_rate));
    };
    for (int j = 8; j < 16; ++j)
        check(y0 + j * step);
    if (C == 0.0)
        return {0.0, y0, 0.0};

    // C e^{-rate (Y-y0)} / rate <= tol/2
    const double reach = std::log(2.0 * C / (decay_rate * tol)) / decay_rate;
    const double Y = y0 + std::max(reach, 16 * step);
    if (Y > y0 + 16 * step) {
        for (int j = 1; j <= 8; ++j)
            check(y0 + 16 * step + j * (Y - y0 - 16 * step) / 8.0);
    }
    RealFunction g = [&](double y) { return cplx(0.0, 1.0) * f(cplx(x0, y)); };
    const Integral body = integrate_interval(g, y0, Y, tol / 2);
    const double tail = C * std::exp(-decay_rate * (Y - y0)) / decay_rate;
    return {body.value, Y, body.error + tail};
}

cplx integrate_vertical_ray(const ComplexFunction& f, double x0, double y0, double decay_rate,
                            double tol)
{
    return integrate_vertical_ray_ex(f, x0, y0, decay_rate, tol).value;
}

cplx integrate_fundamental_domain(const PlaneFunction& g, double tol)
{
    RealFunction outer = [&](double x) {
        const double y_low = std::sqrt(1.0 - x * x);
        RealFunction inner = [&](double s) {
            const double y = y_low / s;
            return g(x, y) * (y_low / (s * s));
        };
        return integrate_interval(inner, 0.0, 1.0, tol / 4).value;
    };
    return integrate_interval(outer, -0.5, 0.5, tol / 2).value;
}

} // namespace modcup::quad
