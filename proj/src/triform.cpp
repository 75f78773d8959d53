#include "modcup/triform.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <istream>
#include <sstream>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "modcup/error.hpp"

namespace modcup::triform {

namespace {

using forms::QExpansion;

constexpr double pi = std::numbers::pi;
constexpr double sqrt3 = std::numbers::sqrt3;
constexpr cplx I(0.0, 1.0);

bool same(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

bool congruent_mod2(double a, double b)
{
    const double d = (a - b) / 2.0;
    return std::abs(d - std::round(d)) < 1e-12;
}

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void check_form(const QExpansion& f, double r, double p, const char* name)
{
    if (!same(f.weight(), r) || !same(f.p(), p))
        throw ParameterError(std::string("triple form: ") + name + " has weight " +
                             num(f.weight()) + " and p = " + num(f.p()) + ", expected " +
                             num(r) + " and " + num(p));
}

// Raises TruncationError when the expansion is too short at the lowest height used.
void check_tail(const QExpansion& f, double y_min, double tol, const char* who)
{
    const double bound = f.tail_bound(y_min);
    if (bound > tol)
        throw TruncationError(std::string(who) + ": q-expansion tail bound " + num(bound) +
                              " exceeds " + num(tol) + " at Im tau = " + num(y_min));
}

int resolve_threads(int threads)
{
    if (threads > 0)
        return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace

WeightTriple WeightTriple::from_eta(double r1, double r2)
{
    WeightTriple wt{r1, r2, 4.0 - r1 - r2, r1, r2, -(r1 + r2)};
    wt.validate();
    return wt;
}

void WeightTriple::validate() const
{
    if (!same(r1 + r2 + r3, 4.0))
        throw ParameterError("WeightTriple: r1 + r2 + r3 must equal 4");
    if (!(std::abs(p1 + p2 + p3) < 1e-12))
        throw ParameterError("WeightTriple: p1 + p2 + p3 must vanish");
    if (!congruent_mod2(p1, r1) || !congruent_mod2(p2, r2) || !congruent_mod2(p3, r3))
        throw ParameterError("WeightTriple: p_j must match r_j modulo 2");
    if (!(r1 < 2.0))
        throw ParameterError("WeightTriple: r1 must be below 2, got " + num(r1));
    if (!(r2 > 0.0 && r2 < 2.0))
        throw ParameterError("WeightTriple: r2 must lie in (0, 2), got " + num(r2));
    if (!(r3 > 0.0))
        throw ParameterError("WeightTriple: r3 must be positive, got " + num(r3));
}

PsiKernel::PsiKernel(double r1, double r2)
    : r1_(r1), r2_(r2), mass_(0.0), integrator_(1.0 - r1, 1.0 - r2)
{
    if (!(r1 < 2.0) || !(r2 > 0.0 && r2 < 2.0))
        throw ParameterError("PsiKernel: needs r1 < 2 and 0 < r2 < 2");
    mass_ = special::beta(2.0 - r2, 2.0 - r1);
}

double PsiKernel::bare_at_zero(double mu1, double mu2) const
{
    if (!(mu2 > 0))
        throw ParameterError("PsiKernel: mu2 must be positive");
    return std::exp(-2 * pi * mu2 - pi * sqrt3 * mu1) * mass_ * special::sinc(pi * mu1) / mu2;
}

double PsiKernel::bare_scaled(double mu1, double mu2, double mu3, double tol, double scale) const
{
    if (!(mu2 > 0))
        throw ParameterError("PsiKernel: mu2 must be positive");
    if (!(mu2 + mu3 > 0))
        throw ParameterError("PsiKernel: mu2 + mu3 must be positive");
    if (mu3 == 0.0)
        return scale * bare_at_zero(mu1, mu2);
    const double front = std::exp(-2 * pi * mu2 - pi * sqrt3 * (mu1 + mu3));
    const double damp = pi * (2.0 - sqrt3) * mu3;
    quad::RealFunction g = [=](double u) -> cplx {
        return scale * std::exp(-damp * u) / (mu2 + mu3 * u) *
               special::sinc(pi * (mu1 + (1.0 - u) * mu3));
    };
    const quad::Integral body = integrator_.integrate(g, tol / front);
    return front * body.value.real();
}

double PsiKernel::bare(double mu1, double mu2, double mu3, double tol) const
{
    return bare_scaled(mu1, mu2, mu3, tol, 1.0);
}

cplx PsiKernel::operator()(double mu1, double mu2, double mu3, double tol) const
{
    return bare(mu1, mu2, mu3, tol) / (2 * pi * I);
}

cplx psi_kernel(double r1, double r2, double mu1, double mu2, double mu3, double tol)
{
    if (!(4.0 - r1 - r2 > 0))
        throw ParameterError("psi_kernel: r3 = 4 - r1 - r2 must be positive");
    if (!(mu3 >= 0))
        throw ParameterError("psi_kernel: mu3 must be non-negative");
    return PsiKernel(r1, r2)(mu1, mu2, mu3, tol);
}

cplx series_prefactor(const WeightTriple& wt)
{
    // the Fourier-term integral over the ray carries -1/(2 pi i mu2), hence
    // the sign relative to the kernel's +1/(2 pi i)
    return -special::cpow(cplx(0.0, -2.0), wt.r3) /
           (special::beta(2.0 - wt.r1, 2.0 - wt.r2) * 2 * pi * I);
}

TripleFormResult bare_triple_sum(const WeightTriple& wt, const QExpansion& f1,
                                 const QExpansion& f2, const QExpansion& f3, double tol,
                                 int threads)
{
    wt.validate();
    check_form(f1, wt.r1, wt.p1, "f1");
    check_form(f2, wt.r2, wt.p2, "f2");
    check_form(f3, wt.r3, wt.p3, "f3");
    if (!(tol > 0))
        throw ParameterError("bare_triple_sum: tolerance must be positive");
    if (!(f2.mu(0) > 0))
        throw ParameterError("bare_triple_sum: f2 must be a cusp form");

    TripleFormResult out{0.0, 0.0, f1.order(), f2.order(), f3.order(), 0, 0};
    if (f1.is_zero() || f2.is_zero() || f3.is_zero())
        return out;
    const int M1 = out.M1, M2 = out.M2, M3 = out.M3;
    if (!(f2.mu(0) + f3.mu(0) > 0))
        throw ParameterError("bare_triple_sum: mu2 + mu3 must stay positive on the grid");

    const PsiKernel psi(wt.r1, wt.r2);
    auto index = [&](int m1, int m2, int m3) {
        return (static_cast<std::size_t>(m1) * (M2 + 1) + m2) * (M3 + 1) + m3;
    };

    // a priori bounds with |S| <= 1
    std::vector<double> bound(static_cast<std::size_t>(M1 + 1) * (M2 + 1) * (M3 + 1));
    special::CompensatedSum total_bound;
    for (int m1 = 0; m1 <= M1; ++m1) {
        for (int m2 = 0; m2 <= M2; ++m2) {
            for (int m3 = 0; m3 <= M3; ++m3) {
                const double mu1 = f1.mu(m1), mu2 = f2.mu(m2), mu3 = f3.mu(m3);
                const double a = std::abs(f1.coeff(m1) * f2.coeff(m2) * f3.coeff(m3));
                const double b = a * std::exp(-2 * pi * mu2 - pi * sqrt3 * (mu1 + mu3) +
                                              std::max(0.0, -pi * (2.0 - sqrt3) * mu3)) *
                                 psi.mass() / std::min(mu2, mu2 + mu3);
                bound[index(m1, m2, m3)] = b;
                total_bound += b;
            }
        }
    }

    // tail past the truncation: geometric extrapolation from the last two faces
    double tail = 0.0;
    auto face = [&](int which, int k) {
        special::CompensatedSum s;
        for (int m1 = 0; m1 <= M1; ++m1)
            for (int m2 = 0; m2 <= M2; ++m2)
                for (int m3 = 0; m3 <= M3; ++m3) {
                    const int m = which == 0 ? m1 : which == 1 ? m2 : m3;
                    if (m == k)
                        s += bound[index(m1, m2, m3)];
                }
        return s.value();
    };
    const int Ms[3] = {M1, M2, M3};
    for (int j = 0; j < 3; ++j) {
        if (Ms[j] < 1) {
            tail = std::numeric_limits<double>::infinity();
            break;
        }
        const double last = face(j, Ms[j]);
        const double prev = face(j, Ms[j] - 1);
        if (last == 0.0)
            continue;
        const double rho = prev > 0 ? last / prev : 1.0;
        if (rho >= 1.0) {
            tail = std::numeric_limits<double>::infinity();
            break;
        }
        tail += 10.0 * last * rho / (1.0 - rho);
    }

    const double total = std::max(total_bound.value(), std::numeric_limits<double>::min());
    const double skip_below = tol / (10.0 * static_cast<double>(bound.size()));

    // one partial sum per m1, reduced in index order afterwards
    std::vector<double> partial(static_cast<std::size_t>(M1) + 1, 0.0);
    std::vector<double> skipped_mass(static_cast<std::size_t>(M1) + 1, 0.0);
    std::vector<long> evaluated(static_cast<std::size_t>(M1) + 1, 0);
    std::vector<long> skipped(static_cast<std::size_t>(M1) + 1, 0);
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> failure(static_cast<std::size_t>(M1) + 1);

    auto row = [&](int m1) {
        special::CompensatedSum sum;
        double skip_mass = 0.0;
        for (int m2 = 0; m2 <= M2; ++m2) {
            for (int m3 = 0; m3 <= M3; ++m3) {
                const double b = bound[index(m1, m2, m3)];
                if (b < skip_below) {
                    skip_mass += b;
                    ++skipped[m1];
                    continue;
                }
                const double a = f1.coeff(m1) * f2.coeff(m2) * f3.coeff(m3);
                const double term_tol = 0.5 * tol * b / total;
                sum += a * psi.bare(f1.mu(m1), f2.mu(m2), f3.mu(m3), term_tol / std::abs(a));
                ++evaluated[m1];
            }
        }
        partial[m1] = sum.value();
        skipped_mass[m1] = skip_mass;
    };
    auto worker = [&] {
        for (int m1 = next++; m1 <= M1; m1 = next++) {
            try {
                row(m1);
            }
            catch (...) {
                failure[m1] = std::current_exception();
            }
        }
    };
    const int nthreads = std::min(resolve_threads(threads), M1 + 1);
    if (nthreads <= 1) {
        worker();
    }
    else {
        std::vector<std::thread> pool;
        for (int k = 0; k < nthreads; ++k)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    for (const auto& e : failure) {
        if (e)
            std::rethrow_exception(e);
    }

    special::CompensatedSum value;
    for (int m1 = 0; m1 <= M1; ++m1) {
        value += partial[m1];
        tail += skipped_mass[m1];
        out.terms += evaluated[m1];
        out.skipped += skipped[m1];
    }
    out.value = value.value();
    out.tail_estimate = tail;
    return out;
}

TripleFormResult triple_form_series(const WeightTriple& wt, const QExpansion& f1,
                                    const QExpansion& f2, const QExpansion& f3, double tol,
                                    int threads)
{
    const cplx front = series_prefactor(wt);
    TripleFormResult out = bare_triple_sum(wt, f1, f2, f3, tol / std::abs(front), threads);
    out.value *= front;
    out.tail_estimate *= std::abs(front);
    if (out.tail_estimate > tol)
        throw TruncationError("triple_form_series: tail estimate " + num(out.tail_estimate) +
                              " exceeds tolerance " + num(tol) + "; raise the truncation order");
    return out;
}

cplx triple_form_direct(const WeightTriple& wt, const QExpansion& f1, const QExpansion& f2,
                        const QExpansion& f3, double tol)
{
    wt.validate();
    check_form(f1, wt.r1, wt.p1, "f1");
    check_form(f2, wt.r2, wt.p2, "f2");
    check_form(f3, wt.r3, wt.p3, "f3");
    if (!(f2.mu(0) > 0))
        throw ParameterError("triple_form_direct: f2 must be a cusp form");
    if (f1.is_zero() || f2.is_zero() || f3.is_zero())
        return 0.0;
    // chord points tau1 + u (tau2 - tau1) stay at height >= sqrt3/2
    constexpr double y_floor = 0.5;
    check_tail(f1, sqrt3 / 2, tol, "triple_form_direct");
    check_tail(f2, 1.0, tol, "triple_form_direct");
    check_tail(f3, sqrt3 / 2, tol, "triple_form_direct");

    const quad::SingularIntegrator chord(1.0 - wt.r1, 1.0 - wt.r2);
    const double rate = 0.9 * 2 * pi * std::min(f2.mu(0), f2.mu(0) + std::min(0.0, f3.mu(0)));
    if (!(rate > 0))
        throw DecayError("triple_form_direct: the ray integrand does not decay");

    const cplx front = special::cpow(cplx(0.0, -2.0), wt.r3) * special::gamma_real(wt.r3) /
                       (special::gamma_real(2.0 - wt.r1) * special::gamma_real(2.0 - wt.r2));
    const double inner_tol = tol / (4.0 * std::abs(front));

    quad::ComplexFunction outer = [&](cplx tau1) -> cplx {
        quad::ComplexFunction ray = [&](cplx tau2) -> cplx {
            quad::RealFunction along = [&](double u) -> cplx {
                const cplx z = tau1 + u * (tau2 - tau1);
                if (z.imag() < y_floor)
                    throw DomainError("triple_form_direct: chord left the region Im >= 0.5");
                return f3(z);
            };
            return f2(tau2) * chord.integrate(along, inner_tol / 4).value;
        };
        return f1(tau1) * quad::integrate_vertical_ray(ray, 0.0, 1.0, rate, inner_tol / 2);
    };
    return front * quad::integrate_path(outer, quad::ContourPath::rho_arc(), inner_tol);
}

TripleFormResult table_entry(double r1, double r2, int M, double tol, int threads)
{
    const WeightTriple wt = WeightTriple::from_eta(r1, r2);
    const QExpansion f1 = forms::eta_power_expansion(r1, M);
    const QExpansion f2 = forms::eta_power_expansion(r2, M);
    const QExpansion f3 = forms::e4_eta_product(r1, r2, M);
    TripleFormResult out = bare_triple_sum(wt, f1, f2, f3, tol, threads);
    if (out.tail_estimate > tol)
        throw TruncationError("table_entry: tail estimate " + num(out.tail_estimate) +
                              " exceeds tolerance " + num(tol) + " at M = " + std::to_string(M));
    return out;
}

std::vector<std::pair<double, double>> table1_grid()
{
    return {{-0.3, 0.2}, {-0.7, 0.2}, {-0.7, 0.6}, {-1.1, 0.2}, {-1.1, 0.6},
            {-1.1, 1.3}, {-1.5, 0.2}, {-1.5, 0.6}, {-1.5, 1.3}, {-2.4, 0.2},
            {-2.4, 0.6}, {-2.4, 1.3}, {-2.4, 1.8}};
}

std::vector<TableCell> read_table_reference(std::istream& in)
{
    std::vector<TableCell> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream fields(line);
        TableCell cell{};
        char c1 = 0, c2 = 0, c3 = 0;
        if (!(fields >> cell.r1 >> c1 >> cell.r2 >> c2 >> cell.value >> c3 >> cell.rel_tol) ||
            c1 != ',' || c2 != ',' || c3 != ',')
            throw ParameterError("read_table_reference: malformed line " + std::to_string(lineno));
        out.push_back(cell);
    }
    return out;
}

namespace {

void check_pair(const QExpansion& f1, const QExpansion& f2, double r, const char* who)
{
    if (!same(f1.weight(), r) || !same(f2.weight(), r))
        throw ParameterError(std::string(who) + ": both forms need weight r = " + num(r));
    if (!congruent_mod2(f1.p() - f2.p(), 0.0) || std::abs(f1.p() - f2.p()) > 1e-12)
        throw ParameterError(std::string(who) + ": the forms need the same parameter p");
    if (!f1.is_cuspidal() || !f2.is_cuspidal())
        throw ParameterError(std::string(who) + ": both forms must be cusp forms");
}

} // namespace

cplx haberland_lhs(const QExpansion& f1, const QExpansion& f2, double r, double tol)
{
    if (!(r > 0))
        throw ParameterError("haberland_lhs: r must be positive");
    check_pair(f1, f2, r, "haberland_lhs");
    if (f1.is_zero() || f2.is_zero())
        return 0.0;
    check_tail(f1, sqrt3 / 2, tol, "haberland_lhs");
    check_tail(f2, 1.0, tol, "haberland_lhs");
    const double rate = 0.9 * f2.decay_rate();
    const cplx front = special::cpow(2.0 * I, 2.0 - r);

    quad::ComplexFunction outer = [&](cplx tau1) -> cplx {
        // ray tau2 = iy; conj(tau2) = -iy, d conj(tau2) = -i dy
        quad::ComplexFunction ray = [&](cplx tau2) -> cplx {
            return std::conj(f2(tau2)) * special::cpow(tau1 - std::conj(tau2), r - 2.0);
        };
        // the ray driver integrates against d tau2 = i dy
        return -f1(tau1) * quad::integrate_vertical_ray(ray, 0.0, 1.0, rate, tol / 4);
    };
    return front * quad::integrate_path(outer, quad::ContourPath::rho_arc(), tol / 2);
}

cplx petersson(const QExpansion& f1, const QExpansion& f2, double r, double tol)
{
    if (!(r > 0))
        throw ParameterError("petersson: r must be positive");
    check_pair(f1, f2, r, "petersson");
    if (f1.is_zero() || f2.is_zero())
        return 0.0;
    check_tail(f1, sqrt3 / 2, tol, "petersson");
    check_tail(f2, sqrt3 / 2, tol, "petersson");
    quad::PlaneFunction g = [&](double x, double y) -> cplx {
        const cplx z(x, y);
        return f1(z) * std::conj(f2(z)) * std::pow(y, r - 2.0);
    };
    return quad::integrate_fundamental_domain(g, tol);
}

} // namespace modcup::triform
