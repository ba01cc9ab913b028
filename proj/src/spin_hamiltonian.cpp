#include "fiberspin/spin_hamiltonian.hpp"

#include <cmath>

namespace fiberspin::spin {

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Elliptic: return "elliptic";
        case Regime::Hyperbolic: return "hyperbolic";
        case Regime::Degenerate: return "degenerate";
    }
    return "?";
}

const char* to_string(FixedPointAxis a) {
    switch (a) {
        case FixedPointAxis::PlusMx: return "+Mx";
        case FixedPointAxis::MinusMx: return "-Mx";
        case FixedPointAxis::PlusMy: return "+My";
        case FixedPointAxis::MinusMy: return "-My";
        case FixedPointAxis::PlusMz: return "+Mz";
        case FixedPointAxis::MinusMz: return "-Mz";
    }
    return "?";
}

const char* to_string(Stability s) {
    return s == Stability::Center ? "center" : "saddle";
}

TopParameters reduce_to_principal_axes(const QuadraticSpinHamiltonian& h) {
    if (!std::isfinite(h.alpha) || !std::isfinite(h.beta) || !std::isfinite(h.gamma))
        throw std::domain_error("reduce_to_principal_axes: coefficients must be finite");
    TopParameters p;
    const double half_sum = 0.5 * (h.alpha + h.gamma);
    const double r = 0.5 * std::hypot(h.alpha - h.gamma, 2.0 * h.beta);
    p.inv_ix = half_sum + r;
    p.inv_iy = half_sum - r;
    // branch: theta in (-pi/2, pi/2]; theta = +-pi/4 at alpha == gamma
    p.theta = (h.beta == 0.0 && h.alpha == h.gamma)
                  ? 0.0
                  : 0.5 * std::atan2(2.0 * h.beta, h.alpha - h.gamma);
    const double disc = h.alpha * h.gamma - h.beta * h.beta;
    p.regime = disc > 0.0 ? Regime::Elliptic
                          : (disc < 0.0 ? Regime::Hyperbolic : Regime::Degenerate);
    return p;
}

bool positive_definite(const TopParameters& p) {
    return p.regime == Regime::Elliptic && p.inv_iy > 0.0;
}

EnergyBounds energy_bounds(const TopParameters& p) {
    if (p.regime == Regime::Degenerate)
        throw std::domain_error("energy_bounds: degenerate regime (alpha*gamma == beta^2)");
    EnergyBounds b;
    if (p.regime == Regime::Elliptic) {
        if (!positive_definite(p))
            throw std::domain_error(
                "energy_bounds: negative-definite form; negate coefficients and reverse time");
        b.h_min = 0.0;
        b.h_sep = 0.5 * p.inv_iy;  // 1/(2 Iy)
        b.h_max = 0.5 * p.inv_ix;  // 1/(2 Ix)
    } else {
        b.h_min = 0.5 * p.inv_iy;  // -1/(2 Jy)
        b.h_sep = 0.0;
        b.h_max = 0.5 * p.inv_ix;  // 1/(2 Jx)
    }
    return b;
}

FixedPointReport fixed_points(const TopParameters& p) {
    if (p.regime == Regime::Degenerate)
        throw std::domain_error("fixed_points: degenerate regime");
    const double ex = 0.5 * p.inv_ix;
    const double ey = 0.5 * p.inv_iy;
    // elliptic: saddles on +-My; hyperbolic: saddles on +-Mz
    const Stability st_x = Stability::Center;
    const Stability st_y = p.regime == Regime::Elliptic ? Stability::Saddle : Stability::Center;
    const Stability st_z = p.regime == Regime::Elliptic ? Stability::Center : Stability::Saddle;
    auto at = [&](FixedPointAxis axis, const SpinVector& m, double e, Stability st) {
        return FixedPoint{axis, spin_from_principal(m, p.theta), e, st};
    };
    return {at(FixedPointAxis::PlusMx, {1, 0, 0}, ex, st_x),
            at(FixedPointAxis::MinusMx, {-1, 0, 0}, ex, st_x),
            at(FixedPointAxis::PlusMy, {0, 1, 0}, ey, st_y),
            at(FixedPointAxis::MinusMy, {0, -1, 0}, ey, st_y),
            at(FixedPointAxis::PlusMz, {0, 0, 1}, 0.0, st_z),
            at(FixedPointAxis::MinusMz, {0, 0, -1}, 0.0, st_z)};
}

double hamiltonian_eval(const QuadraticSpinHamiltonian& h, const SpinVector& s) {
    return 0.5 * h.alpha * s.sx * s.sx + h.beta * s.sx * s.sy + 0.5 * h.gamma * s.sy * s.sy;
}

SpinVector principal_from_spin(const SpinVector& s, double theta) {
    const double c = std::cos(theta), sn = std::sin(theta);
    return {c * s.sx + sn * s.sy, -sn * s.sx + c * s.sy, s.sz};
}

SpinVector spin_from_principal(const SpinVector& m, double theta) {
    const double c = std::cos(theta), sn = std::sin(theta);
    return {c * m.sx - sn * m.sy, sn * m.sx + c * m.sy, m.sz};
}

}  // namespace fiberspin::spin
