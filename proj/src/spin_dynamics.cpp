#include "fiberspin/spin_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fiberspin::spin {

namespace el = fiberspin::elliptic;

const char* to_string(TrajectoryBranch b) {
    switch (b) {
        case TrajectoryBranch::EllipticLow: return "elliptic-low";
        case TrajectoryBranch::EllipticHigh: return "elliptic-high";
        case TrajectoryBranch::Separatrix: return "separatrix";
        case TrajectoryBranch::HyperbolicPos: return "hyperbolic-pos";
        case TrajectoryBranch::HyperbolicNeg: return "hyperbolic-neg";
        case TrajectoryBranch::Heteroclinic: return "heteroclinic";
    }
    return "?";
}

SpinVector eom_rhs(const QuadraticSpinHamiltonian& h, const SpinVector& s) {
    return {(h.beta * s.sx + h.gamma * s.sy) * s.sz,
            -(h.beta * s.sy + h.alpha * s.sx) * s.sz,
            (h.alpha - h.gamma) * s.sx * s.sy + h.beta * (s.sy * s.sy - s.sx * s.sx)};
}

namespace {

SpinVector axpy(const SpinVector& a, double c, const SpinVector& b) {
    return {a.sx + c * b.sx, a.sy + c * b.sy, a.sz + c * b.sz};
}

SpinVector rk4_step(const QuadraticSpinHamiltonian& h, const SpinVector& s, double dt) {
    const SpinVector k1 = eom_rhs(h, s);
    const SpinVector k2 = eom_rhs(h, axpy(s, 0.5 * dt, k1));
    const SpinVector k3 = eom_rhs(h, axpy(s, 0.5 * dt, k2));
    const SpinVector k4 = eom_rhs(h, axpy(s, dt, k3));
    return {s.sx + dt / 6.0 * (k1.sx + 2.0 * k2.sx + 2.0 * k3.sx + k4.sx),
            s.sy + dt / 6.0 * (k1.sy + 2.0 * k2.sy + 2.0 * k3.sy + k4.sy),
            s.sz + dt / 6.0 * (k1.sz + 2.0 * k2.sz + 2.0 * k3.sz + k4.sz)};
}

SpinVector apply_mirror(const SpinVector& m, OrbitMirror mirror) {
    switch (mirror) {
        case OrbitMirror::None: return m;
        case OrbitMirror::AboutMx: return {m.sx, -m.sy, -m.sz};
        case OrbitMirror::AboutMy: return {-m.sx, m.sy, -m.sz};
        case OrbitMirror::AboutMz: return {-m.sx, -m.sy, m.sz};
    }
    return m;
}

}  // namespace

NumericTrajectory numeric_trajectory(const QuadraticSpinHamiltonian& h, const SpinVector& s0,
                                     double t_end, double dt,
                                     const NumericTrajectoryOptions& options) {
    if (!(dt > 0.0)) throw std::domain_error("numeric_trajectory: dt must be positive");
    if (std::abs(s0.norm2() - 1.0) > 1e-12)
        throw std::domain_error("numeric_trajectory: |s0| must be 1 within 1e-12");
    const double h0 = hamiltonian_eval(h, s0);
    const auto n_steps = static_cast<std::size_t>(std::llround(t_end / dt));
    NumericTrajectory out;
    out.t.reserve(n_steps / options.store_stride + 2);
    out.s.reserve(n_steps / options.store_stride + 2);
    SpinVector s = s0;
    out.t.push_back(0.0);
    out.s.push_back(s);
    for (std::size_t i = 1; i <= n_steps; ++i) {
        s = rk4_step(h, s, dt);
        if (options.renormalize) {
            const double inv = 1.0 / std::sqrt(s.norm2());
            s.sx *= inv;
            s.sy *= inv;
            s.sz *= inv;
        }
        out.max_norm_drift = std::max(out.max_norm_drift, std::abs(s.norm2() - 1.0));
        out.max_energy_drift =
            std::max(out.max_energy_drift, std::abs(hamiltonian_eval(h, s) - h0));
        if (i % static_cast<std::size_t>(options.store_stride) == 0 || i == n_steps) {
            out.t.push_back(static_cast<double>(i) * dt);
            out.s.push_back(s);
        }
    }
    if (std::max(out.max_norm_drift, out.max_energy_drift) > options.max_drift)
        throw std::runtime_error("numeric_trajectory: drift exceeded tolerance; reduce dt");
    return out;
}

EllipticTrajectoryParams trajectory_params(const TopParameters& p, double H, OrbitMirror mirror) {
    if (p.regime == Regime::Degenerate)
        throw std::domain_error("trajectory_params: degenerate regime has no elliptic form");
    const EnergyBounds b = energy_bounds(p);
    const double span = std::max(std::abs(b.h_max), std::abs(b.h_min));
    const double tol = 1e-12 * std::max(1.0, span);
    if (H < b.h_min - tol || H > b.h_max + tol)
        throw std::domain_error("trajectory_params: H outside energy bounds");
    H = std::clamp(H, b.h_min, b.h_max);

    EllipticTrajectoryParams tp;
    tp.theta_frame = p.theta;
    tp.energy = H;
    tp.mirror = mirror;

    if (p.regime == Regime::Elliptic) {
        const double ix = p.Ix(), iy = p.Iy();
        const double omega = std::sqrt(p.inv_ix * p.inv_iy);
        const double hx = 2.0 * H * ix;  // in [0, 1]
        const double hy = 2.0 * H * iy;  // in [0, 1/(something)], separatrix at 1
        if (std::abs(hy - 1.0) <= 1e-14 * std::max(1.0, std::abs(hy))) {
            tp.branch = TrajectoryBranch::Separatrix;
            tp.modulus = el::EllipticModulus::from_pair(1.0, 0.0);
            tp.amp_x = std::sqrt(ix / iy);
            tp.amp_y = 1.0;
            tp.amp_z = std::sqrt(1.0 - ix / iy);
            tp.rate = omega * tp.amp_z;
            tp.amplitude_param = 0.0;
            tp.quarter_period = std::numeric_limits<double>::infinity();
        } else if (hy < 1.0) {
            tp.branch = TrajectoryBranch::EllipticLow;
            const double k2 = 2.0 * H * (iy - ix) / (1.0 - hx);
            const double kp2 = (1.0 - hy) / (1.0 - hx);
            tp.modulus = el::EllipticModulus::from_pair(std::sqrt(k2), std::sqrt(kp2));
            tp.amp_x = std::sqrt(hx);
            tp.amp_y = std::sqrt(hy);
            tp.amp_z = std::sqrt(1.0 - hx);
            tp.rate = omega * tp.amp_z;
            // cn(a, k') == amp_x; the argument diverges at the H == 0 pole
            tp.amplitude_param = tp.amp_x > 0.0
                                     ? el::inverse_cn(tp.amp_x, tp.modulus.kprime)
                                     : std::numeric_limits<double>::infinity();
            tp.quarter_period = el::complete_elliptic_K(tp.modulus.k);
        } else {
            tp.branch = TrajectoryBranch::EllipticHigh;
            const double denom = 2.0 * H * (iy - ix);
            const double k2 = (1.0 - hx) / denom;
            const double kp2 = (hy - 1.0) / denom;
            tp.modulus = el::EllipticModulus::from_pair(std::sqrt(k2), std::sqrt(kp2));
            tp.amp_x = std::sqrt(hx);
            tp.amp_y = std::sqrt(iy * (1.0 - hx) / (iy - ix));
            tp.amp_z = std::sqrt(1.0 - hx);
            tp.rate = omega * std::sqrt(denom);
            // argument where cd(., k1') equals amp_x
            const double x = tp.amp_x;
            const double sn2 = (1.0 - x * x) / (1.0 - kp2 * x * x);
            tp.amplitude_param =
                el::inverse_sn(std::sqrt(std::clamp(sn2, 0.0, 1.0)), tp.modulus.kprime);
            tp.quarter_period = el::complete_elliptic_K(tp.modulus.k);
        }
        return tp;
    }

    // hyperbolic (inverted top)
    const double jx = p.Jx(), jy = p.Jy();
    const double omega = std::sqrt(-p.inv_ix * p.inv_iy);
    const double hx = 2.0 * H * jx;  // <= 1
    const double hy = 2.0 * H * jy;  // >= -1
    tp.amp_x = std::sqrt(jx * (1.0 + hy) / (jx + jy));
    tp.amp_y = std::sqrt(jy * (1.0 - hx) / (jx + jy));
    if (std::abs(H) <= 1e-14 * std::max(1.0, span)) {
        tp.branch = TrajectoryBranch::Heteroclinic;
        tp.modulus = el::EllipticModulus::from_pair(1.0, 0.0);
        tp.amp_z = 1.0;
        tp.rate = omega;
        tp.amplitude_param = heteroclinic_angle(jx, jy);
        tp.quarter_period = std::numeric_limits<double>::infinity();
    } else if (H > 0.0) {
        tp.branch = TrajectoryBranch::HyperbolicPos;
        const double k2 = (1.0 - hx) / (1.0 + hy);
        const double kp2 = (hx + hy) / (1.0 + hy);  // 2 H (Jx + Jy) / (1 + 2 H Jy)
        tp.modulus = el::EllipticModulus::from_pair(std::sqrt(k2), std::sqrt(kp2));
        tp.amp_z = std::sqrt(1.0 - hx);
        tp.rate = omega * std::sqrt(1.0 + hy);
        // dn(theta, k') == amp_z; diverges at the H == H_max fixed point
        tp.amplitude_param = tp.amp_z > 0.0
                                 ? el::inverse_dn(tp.amp_z, tp.modulus.kprime)
                                 : std::numeric_limits<double>::infinity();
        tp.quarter_period = el::complete_elliptic_K(tp.modulus.k);
    } else {
        tp.branch = TrajectoryBranch::HyperbolicNeg;
        const double k2 = (1.0 + hy) / (1.0 - hx);
        const double kp2 = -(hx + hy) / (1.0 - hx);
        tp.modulus = el::EllipticModulus::from_pair(std::sqrt(k2), std::sqrt(kp2));
        tp.amp_z = std::sqrt(1.0 + hy);
        tp.rate = omega * std::sqrt(1.0 - hx);
        // dn(theta1, k1') == amp_z; diverges at the H == H_min fixed point
        tp.amplitude_param = tp.amp_z > 0.0
                                 ? el::inverse_dn(tp.amp_z, tp.modulus.kprime)
                                 : std::numeric_limits<double>::infinity();
        tp.quarter_period = el::complete_elliptic_K(tp.modulus.k);
    }
    return tp;
}

SpinVector analytic_trajectory(const EllipticTrajectoryParams& tp, double t) {
    const double u = tp.rate * t;
    SpinVector m;
    switch (tp.branch) {
        case TrajectoryBranch::EllipticLow: {
            const auto j = el::jacobi_sn_cn_dn(u, tp.modulus.k);
            m = {tp.amp_x * j.cn, -tp.amp_y * j.sn, tp.amp_z * j.dn};
            break;
        }
        case TrajectoryBranch::EllipticHigh: {
            const auto j = el::jacobi_sn_cn_dn(u, tp.modulus.k);
            m = {tp.amp_x * j.dn, -tp.amp_y * j.sn, tp.amp_z * j.cn};
            break;
        }
        case TrajectoryBranch::Separatrix: {
            const double sech = 1.0 / std::cosh(u);
            m = {tp.amp_x * sech, -std::tanh(u), tp.amp_z * sech};
            break;
        }
        case TrajectoryBranch::HyperbolicPos: {
            const auto j = el::jacobi_sn_cn_dn(u, tp.modulus.k);
            m = {tp.amp_x * j.dn, tp.amp_y * j.cn, tp.amp_z * j.sn};
            break;
        }
        case TrajectoryBranch::HyperbolicNeg: {
            const auto j = el::jacobi_sn_cn_dn(u, tp.modulus.k);
            m = {tp.amp_x * j.cn, tp.amp_y * j.dn, tp.amp_z * j.sn};
            break;
        }
        case TrajectoryBranch::Heteroclinic: {
            const double sech = 1.0 / std::cosh(u);
            m = {tp.amp_x * sech, tp.amp_y * sech, std::tanh(u)};
            break;
        }
    }
    return spin_from_principal(apply_mirror(m, tp.mirror), tp.theta_frame);
}

SpinVector analytic_trajectory(const TopParameters& p, double H, double t) {
    return analytic_trajectory(trajectory_params(p, H), t);
}

double heteroclinic_angle(double jx, double jy) {
    if (!(jx > 0.0) || !(jy > 0.0))
        throw std::domain_error("heteroclinic_angle: Jx, Jy must be positive");
    return std::asin(std::sqrt(jx / (jx + jy)));
}

SpinVector heteroclinic_orbit(const TopParameters& p, double t, HeteroclinicOrbitId orbit) {
    if (p.regime != Regime::Hyperbolic)
        throw std::domain_error("heteroclinic_orbit: requires the hyperbolic regime");
    const double jx = p.Jx(), jy = p.Jy();
    const double omega = std::sqrt(-p.inv_ix * p.inv_iy);
    const double vartheta = heteroclinic_angle(jx, jy);
    const double sech = 1.0 / std::cosh(omega * t);
    const double th = std::tanh(omega * t);
    const double mx = std::sin(vartheta) * sech;
    const double my = std::cos(vartheta) * sech;
    SpinVector m;
    switch (orbit) {
        case HeteroclinicOrbitId::L1: m = {mx, my, th}; break;
        case HeteroclinicOrbitId::L2: m = {-mx, my, -th}; break;
        case HeteroclinicOrbitId::L1Mirror: m = {-mx, -my, th}; break;
        case HeteroclinicOrbitId::L2Mirror: m = {mx, -my, -th}; break;
    }
    return spin_from_principal(m, p.theta);
}

double heteroclinic_area(double jx, double jy) {
    if (!(jx > 0.0) || !(jy > 0.0))
        throw std::domain_error("heteroclinic_area: Jx, Jy must be positive");
    return 2.0 * std::numbers::pi - 4.0 * std::atan(std::sqrt(jx / jy));
}

double oscillation_period(const TopParameters& p, double H) {
    const EllipticTrajectoryParams tp = trajectory_params(p, H);
    if (tp.branch == TrajectoryBranch::Separatrix || tp.branch == TrajectoryBranch::Heteroclinic)
        throw std::domain_error("oscillation_period: infinite period on the separatrix");
    return 4.0 * tp.quarter_period / tp.rate;
}

double time_offset_on_orbit(const EllipticTrajectoryParams& tp, const SpinVector& s) {
    // undo frame rotation and mirror (mirrors are involutions)
    const SpinVector m = apply_mirror(principal_from_spin(s, tp.theta_frame), tp.mirror);
    double t0 = 0.0;
    const double k = tp.modulus.k;
    switch (tp.branch) {
        case TrajectoryBranch::EllipticLow: {
            if (tp.amp_y == 0.0) { t0 = 0.0; break; }  // pole fixed point
            const double snv = std::clamp(-m.sy / tp.amp_y, -1.0, 1.0);
            double u = std::copysign(el::inverse_sn(std::abs(snv), k), snv);
            if (m.sx < 0.0) u = 2.0 * tp.quarter_period - u;
            t0 = u / tp.rate;
            break;
        }
        case TrajectoryBranch::EllipticHigh: {
            const double snv = std::clamp(-m.sy / tp.amp_y, -1.0, 1.0);
            double u = std::copysign(el::inverse_sn(std::abs(snv), k), snv);
            if (m.sz < 0.0) u = 2.0 * tp.quarter_period - u;
            t0 = u / tp.rate;
            break;
        }
        case TrajectoryBranch::HyperbolicPos: {
            const double snv = std::clamp(m.sz / tp.amp_z, -1.0, 1.0);
            double u = std::copysign(el::inverse_sn(std::abs(snv), k), snv);
            if (m.sy < 0.0) u = 2.0 * tp.quarter_period - u;
            t0 = u / tp.rate;
            break;
        }
        case TrajectoryBranch::HyperbolicNeg: {
            const double snv = std::clamp(m.sz / tp.amp_z, -1.0, 1.0);
            double u = std::copysign(el::inverse_sn(std::abs(snv), k), snv);
            if (m.sx < 0.0) u = 2.0 * tp.quarter_period - u;
            t0 = u / tp.rate;
            break;
        }
        case TrajectoryBranch::Separatrix:
            t0 = std::atanh(std::clamp(-m.sy, -1.0, 1.0)) / tp.rate;
            break;
        case TrajectoryBranch::Heteroclinic:
            t0 = std::atanh(std::clamp(m.sz, -1.0, 1.0)) / tp.rate;
            break;
    }
    const SpinVector check = analytic_trajectory(tp, t0);
    const double dx = check.sx - s.sx, dy = check.sy - s.sy, dz = check.sz - s.sz;
    if (std::sqrt(dx * dx + dy * dy + dz * dz) > 1e-8)
        throw std::domain_error("time_offset_on_orbit: point is not on the selected orbit");
    return t0;
}

}  // namespace fiberspin::spin
