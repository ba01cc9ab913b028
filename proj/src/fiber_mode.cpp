#include "fiberspin/fiber_mode.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace fiberspin::fiber {

namespace {

constexpr double kJ01 = 2.404825557695773;  // first zero of J0
constexpr double kVc = 2.405;               // single-mode threshold

// adaptive Simpson quadrature
double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double m, double b, double fa,
             double fm, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adapt(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    return adapt(f, a, m, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 48);
}

}  // namespace

double FiberGeometry::k0() const { return 2.0 * std::numbers::pi / lambda0; }

double FiberGeometry::V() const {
    return k0() * core_radius * std::sqrt(n1 * n1 - n_cladding * n_cladding);
}

double FiberGeometry::index_contrast() const { return (n1 - n_cladding) / n1; }

void validate(const FiberGeometry& g) {
    if (!(g.core_radius > 0.0) || !(g.lambda0 > 0.0) || !(g.n_cladding > 0.0) ||
        !(g.n1 > g.n_cladding))
        throw std::domain_error("FiberGeometry: need a > 0, lambda0 > 0, n1 > nc > 0");
}

double Lp01Mode::profile(double r) const {
    const double a = geometry.core_radius;
    if (r <= a) return std::cyl_bessel_j(0, p() * r) / std::cyl_bessel_j(0, u);
    return std::cyl_bessel_k(0, q() * r) / std::cyl_bessel_k(0, w);
}

double Lp01Mode::continuity_residual() const {
    return u * std::cyl_bessel_j(1, u) / std::cyl_bessel_j(0, u) -
           w * std::cyl_bessel_k(1, w) / std::cyl_bessel_k(0, w);
}

Lp01Mode lp01_solve(const FiberGeometry& g) {
    validate(g);
    const double V = g.V();
    auto res = [V](double u) {
        const double w = std::sqrt(std::max(V * V - u * u, 0.0));
        if (w == 0.0) return u * std::cyl_bessel_j(1, u) / std::cyl_bessel_j(0, u);
        return u * std::cyl_bessel_j(1, u) / std::cyl_bessel_j(0, u) -
               w * std::cyl_bessel_k(1, w) / std::cyl_bessel_k(0, w);
    };
    double lo = 1e-9 * V;
    double hi = std::min(V, kJ01) * (1.0 - 1e-13);
    if (!(res(lo) < 0.0) || !(res(hi) > 0.0))
        throw std::domain_error("lp01_solve: no root of the continuity condition (below cutoff)");
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (res(mid) > 0.0 ? hi : lo) = mid;
    }
    Lp01Mode m;
    m.geometry = g;
    m.V = V;
    m.u = 0.5 * (lo + hi);
    m.w = std::sqrt(V * V - m.u * m.u);
    const double k = g.k0();
    m.beta = std::sqrt(g.n1 * g.n1 * k * k - (m.u / g.core_radius) * (m.u / g.core_radius));
    m.n_e = m.beta / k;
    return m;
}

SingleModeReport single_mode_check(const FiberGeometry& g) {
    validate(g);
    SingleModeReport r;
    r.V = g.V();
    r.single_mode = r.V < kVc;
    r.weakly_guiding = g.index_contrast() < 0.01;
    return r;
}

double cutoff_wavelength(const FiberGeometry& g) {
    validate(g);
    return 2.0 * std::numbers::pi * g.core_radius *
           std::sqrt(g.n1 * g.n1 - g.n_cladding * g.n_cladding) / kVc;
}

double gamma_parameter(const FiberGeometry& g, double chi3_xxxx, const Lp01Mode& mode) {
    validate(g);
    if (!(mode.u > 0.0) || !(mode.w > 0.0))
        throw std::domain_error("gamma_parameter: mode not solved");
    const double a = g.core_radius;
    const double r_max = a + 60.0 / mode.q();  // K0 tail below 1e-26 of the edge value
    auto f2 = [&](double r) { const double F = mode.profile(r); return F * F * r; };
    auto f4 = [&](double r) { const double F = mode.profile(r); double F2 = F * F; return F2 * F2 * r; };
    const double scale2 = a * a;
    const double i2 = integrate(f2, 0.0, a, 1e-12 * scale2) + integrate(f2, a, r_max, 1e-12 * scale2);
    const double i4 = integrate(f4, 0.0, a, 1e-12 * scale2) + integrate(f4, a, r_max, 1e-12 * scale2);
    return 3.0 * g.k0() / (8.0 * mode.n_e) * chi3_xxxx * (i4 / i2);
}

LengthScales length_scales(double p0, double t0, double beta2, double delta_beta, double gamma) {
    LengthScales s;
    if (beta2 != 0.0) {
        s.dispersion = t0 * t0 / std::abs(beta2);
        s.dispersion_valid = true;
    } else {
        s.dispersion = std::numeric_limits<double>::infinity();
    }
    if (gamma != 0.0 && p0 != 0.0) {
        s.nonlinear = 1.0 / std::abs(gamma * p0);
        s.nonlinear_valid = true;
    } else {
        s.nonlinear = std::numeric_limits<double>::infinity();
    }
    if (delta_beta != 0.0) {
        s.beat = 2.0 * std::numbers::pi / std::abs(delta_beta);
        s.beat_valid = true;
    } else {
        s.beat = std::numeric_limits<double>::infinity();
    }
    s.dispersion_negligible_50km = s.dispersion > 5e4;
    s.nonlinear_negligible_50km = s.nonlinear > 5e4;
    return s;
}

}  // namespace fiberspin::fiber
