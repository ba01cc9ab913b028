#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fiberspin/spin_dynamics.hpp"
#include "oracle_helpers.hpp"

using namespace fiberspin::spin;

namespace {

double distance(const SpinVector& a, const SpinVector& b) {
    return std::sqrt((a.sx - b.sx) * (a.sx - b.sx) + (a.sy - b.sy) * (a.sy - b.sy) +
                     (a.sz - b.sz) * (a.sz - b.sz));
}

}  // namespace

TEST_CASE("eom_rhs: fixed point, symmetric top, tangency") {
    const QuadraticSpinHamiltonian h{2.0, 1.0, 2.0};
    const auto pole = eom_rhs(h, {0.0, 0.0, 1.0});
    CHECK(pole.sx == 0.0);
    CHECK(pole.sy == 0.0);
    CHECK(pole.sz == 0.0);

    // alpha == gamma, beta == 0: rotation about z
    const QuadraticSpinHamiltonian sym{1.5, 0.0, 1.5};
    std::mt19937 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        SpinVector s{g(rng), g(rng), g(rng)};
        const double inv = 1.0 / std::sqrt(s.norm2());
        s = {s.sx * inv, s.sy * inv, s.sz * inv};
        const auto r = eom_rhs(sym, s);
        CHECK(r.sx == doctest::Approx(1.5 * s.sy * s.sz).epsilon(1e-14));
        CHECK(r.sy == doctest::Approx(-1.5 * s.sx * s.sz).epsilon(1e-14));
        CHECK(r.sz == 0.0);
        // tangency s . ds/dt = 0
        const QuadraticSpinHamiltonian hr{g(rng), g(rng), g(rng)};
        const auto rr = eom_rhs(hr, s);
        CHECK(std::abs(s.sx * rr.sx + s.sy * rr.sy + s.sz * rr.sz) < 1e-14);
    }
}

TEST_CASE("eom_rhs matches the Poisson-bracket oracle") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const QuadraticSpinHamiltonian h{d(rng), d(rng), d(rng)};
        SpinVector s{g(rng), g(rng), g(rng)};
        const double inv = 1.0 / std::sqrt(s.norm2());
        s = {s.sx * inv, s.sy * inv, s.sz * inv};
        const auto lhs = eom_rhs(h, s);
        const auto rhs = oracle::poisson_bracket_rhs(h, s);
        CHECK(std::abs(lhs.sx - rhs.sx) < 1e-9);
        CHECK(std::abs(lhs.sy - rhs.sy) < 1e-9);
        CHECK(std::abs(lhs.sz - rhs.sz) < 1e-9);
    }
}

TEST_CASE("numeric trajectory: fixed point stays put, drift is small") {
    const QuadraticSpinHamiltonian h{2.0, 1.0, 2.0};
    const auto fixed = numeric_trajectory(h, {0.0, 0.0, 1.0}, 5.0, 1e-3);
    for (const auto& s : fixed.s) CHECK(distance(s, {0.0, 0.0, 1.0}) == 0.0);

    // energy drift per unit time below 1e-9 at dt = 1e-3, H = 0.4 start
    const auto p = reduce_to_principal_axes(h);
    const auto start = analytic_trajectory(p, 0.4, 0.0);
    const auto run = numeric_trajectory(h, start, 10.0, 1e-3);
    CHECK(run.max_energy_drift / 10.0 < 1e-9);
    CHECK(run.max_norm_drift / 10.0 < 1e-9);

    CHECK_THROWS_AS(numeric_trajectory(h, {0.5, 0.0, 0.0}, 1.0, 1e-3), std::domain_error);
    NumericTrajectoryOptions strict;
    strict.max_drift = 1e-18;
    CHECK_THROWS_AS(numeric_trajectory(h, start, 5.0, 0.1, strict), std::runtime_error);
}

TEST_CASE("analytic trajectories satisfy conservation and match RK4") {
    std::mt19937 rng(2025);
    std::uniform_real_distribution<double> frac(0.1, 0.9);
    auto check_branch = [&](const oracle::RandomTop& rt, double H) {
        const auto tp = trajectory_params(rt.p, H);
        const auto s0 = analytic_trajectory(tp, 0.0);
        CHECK(std::abs(s0.norm2() - 1.0) < 1e-10);
        CHECK(std::abs(hamiltonian_eval(rt.h, s0) - H) < 1e-10);
        const double T = oscillation_period(rt.p, H);
        const double dt = 1e-3;
        const auto run = numeric_trajectory(rt.h, s0, 1.5 * T, dt);
        double sup = 0.0;
        for (std::size_t i = 0; i < run.t.size(); ++i)
            sup = std::max(sup, distance(run.s[i], analytic_trajectory(tp, run.t[i])));
        CHECK(sup < 1e-6);
        // conservation along the analytic orbit
        for (double t : {0.3 * T, 0.77 * T, 2.13 * T}) {
            const auto s = analytic_trajectory(tp, t);
            CHECK(std::abs(s.norm2() - 1.0) < 1e-10);
            CHECK(std::abs(hamiltonian_eval(rt.h, s) - H) < 1e-10);
        }
        // recurrence after one full period
        CHECK(distance(analytic_trajectory(tp, T), s0) < 1e-8);
        return tp.branch;
    };

    for (int i = 0; i < 6; ++i) {
        const auto rt = oracle::random_elliptic(rng);
        const auto b = energy_bounds(rt.p);
        CHECK(check_branch(rt, frac(rng) * b.h_sep) == TrajectoryBranch::EllipticLow);
        CHECK(check_branch(rt, b.h_sep + frac(rng) * (b.h_max - b.h_sep)) ==
              TrajectoryBranch::EllipticHigh);
    }
    for (int i = 0; i < 6; ++i) {
        const auto rt = oracle::random_hyperbolic(rng);
        const auto b = energy_bounds(rt.p);
        CHECK(check_branch(rt, frac(rng) * b.h_max) == TrajectoryBranch::HyperbolicPos);
        CHECK(check_branch(rt, frac(rng) * b.h_min) == TrajectoryBranch::HyperbolicNeg);
    }
}

TEST_CASE("branch continuity across the separatrix energy") {
    std::mt19937 rng(5);
    for (int i = 0; i < 10; ++i) {
        const auto rt = oracle::random_elliptic(rng);
        const auto b = energy_bounds(rt.p);
        const auto lo = trajectory_params(rt.p, b.h_sep - 1e-10);
        const auto hi = trajectory_params(rt.p, b.h_sep + 1e-10);
        CHECK(lo.branch == TrajectoryBranch::EllipticLow);
        CHECK(hi.branch == TrajectoryBranch::EllipticHigh);
        for (double t : {0.0, 0.4, 1.1, 2.7}) {
            CHECK(distance(analytic_trajectory(lo, t), analytic_trajectory(hi, t)) < 1e-4);
        }
        // and both agree with the explicit separatrix branch
        const auto sep = trajectory_params(rt.p, b.h_sep);
        CHECK(sep.branch == TrajectoryBranch::Separatrix);
        for (double t : {0.0, 0.9, 3.0})
            CHECK(distance(analytic_trajectory(sep, t), analytic_trajectory(lo, t)) < 1e-4);
    }
}

TEST_CASE("small-H limit reduces to circular precession about the pole") {
    const auto p = reduce_to_principal_axes({2.0, 1.0, 2.0});
    const double H = 1e-8;
    const auto tp = trajectory_params(p, H);
    const double omega = std::sqrt(p.inv_ix * p.inv_iy);
    const double ax = std::sqrt(2.0 * H * p.Ix());
    const double ay = std::sqrt(2.0 * H * p.Iy());
    for (double t : {0.0, 0.3, 1.0, 2.2}) {
        const auto s = analytic_trajectory(tp, t);
        const auto m = principal_from_spin(s, p.theta);
        CHECK(std::abs(m.sx - ax * std::cos(omega * t)) < 1e-10);
        CHECK(std::abs(m.sy + ay * std::sin(omega * t)) < 1e-10);
        CHECK(std::abs(m.sz - 1.0) < 1e-7);
    }
}

TEST_CASE("separatrix branch equals the sech/tanh limit expressions") {
    const auto p = reduce_to_principal_axes({2.0, 1.0, 2.0});
    const auto b = energy_bounds(p);
    const auto tp = trajectory_params(p, b.h_sep);
    const double ratio = p.Ix() / p.Iy();
    const double lam = std::sqrt(p.inv_ix * p.inv_iy) * std::sqrt(1.0 - ratio);
    for (double t : {-3.0, -0.7, 0.0, 1.3, 4.0}) {
        const auto m = principal_from_spin(analytic_trajectory(tp, t), p.theta);
        CHECK(std::abs(m.sx - std::sqrt(ratio) / std::cosh(lam * t)) < 1e-12);
        CHECK(std::abs(m.sy + std::tanh(lam * t)) < 1e-12);
        CHECK(std::abs(m.sz - std::sqrt(1.0 - ratio) / std::cosh(lam * t)) < 1e-12);
    }
    // approaches +-My without crossing
    const auto far = principal_from_spin(analytic_trajectory(tp, 40.0), p.theta);
    CHECK(std::abs(far.sy + 1.0) < 1e-12);
    CHECK(std::abs(far.sx) < 1e-12);
}

TEST_CASE("numeric run at the separatrix energy approaches -My without crossing") {
    const QuadraticSpinHamiltonian h{2.0, 1.0, 2.0};
    const auto p = reduce_to_principal_axes(h);
    const auto b = energy_bounds(p);
    const auto tp = trajectory_params(p, b.h_sep);
    const auto s0 = analytic_trajectory(tp, 0.0);
    const auto run = numeric_trajectory(h, s0, 10.0, 1e-3, {.store_stride = 100});
    double prev_my = 1.0;
    for (const auto& s : run.s) {
        const double my = principal_from_spin(s, p.theta).sy;
        // monotone approach until the saddle is reached at rounding level
        if (prev_my > -0.999999) CHECK(my < prev_my);
        CHECK(my > -1.0 - 1e-9);  // never crosses the saddle
        prev_my = my;
    }
    CHECK(prev_my < -0.999);
}

TEST_CASE("analytic trajectories are genuine flow solutions (finite differences)") {
    std::mt19937 rng(31);
    for (int i = 0; i < 4; ++i) {
        for (bool hyper : {false, true}) {
            const auto rt = hyper ? oracle::random_hyperbolic(rng) : oracle::random_elliptic(rng);
            const auto b = energy_bounds(rt.p);
            const double H = hyper ? 0.4 * b.h_max : 0.5 * b.h_sep;
            for (auto mirror : {OrbitMirror::None, OrbitMirror::AboutMx, OrbitMirror::AboutMy,
                                OrbitMirror::AboutMz}) {
                const auto tp = trajectory_params(rt.p, H, mirror);
                for (double t : {0.0, 0.4, 1.7}) {
                    const auto d = oracle::numeric_derivative(
                        [&](double u) { return analytic_trajectory(tp, u); }, t);
                    const auto r = eom_rhs(rt.h, analytic_trajectory(tp, t));
                    CHECK(std::abs(d.sx - r.sx) < 1e-6);
                    CHECK(std::abs(d.sy - r.sy) < 1e-6);
                    CHECK(std::abs(d.sz - r.sz) < 1e-6);
                }
            }
        }
    }
}

TEST_CASE("time symmetry: (Sx, Sy, -Sz)(-t) solves the same flow") {
    std::mt19937 rng(57);
    const auto rt = oracle::random_elliptic(rng);
    const auto b = energy_bounds(rt.p);
    const auto tp = trajectory_params(rt.p, 0.6 * b.h_sep);
    auto mapped = [&](double t) {
        const auto s = analytic_trajectory(tp, -t);
        return SpinVector{s.sx, s.sy, -s.sz};
    };
    for (double t : {0.0, 0.5, 1.9}) {
        const auto d = oracle::numeric_derivative(mapped, t);
        const auto r = eom_rhs(rt.h, mapped(t));
        CHECK(std::abs(d.sx - r.sx) < 1e-6);
        CHECK(std::abs(d.sy - r.sy) < 1e-6);
        CHECK(std::abs(d.sz - r.sz) < 1e-6);
    }
}

TEST_CASE("heteroclinic orbits: geometry, asymptotics, flow property") {
    const auto p = reduce_to_principal_axes({1.0, 2.0, 1.0});
    const QuadraticSpinHamiltonian h{1.0, 2.0, 1.0};
    const double jx = p.Jx(), jy = p.Jy();
    const double vt = heteroclinic_angle(jx, jy);
    CHECK(std::sin(vt) == doctest::Approx(std::sqrt(jx / (jx + jy))).epsilon(1e-14));

    for (auto id : {HeteroclinicOrbitId::L1, HeteroclinicOrbitId::L2,
                    HeteroclinicOrbitId::L1Mirror, HeteroclinicOrbitId::L2Mirror}) {
        // equator crossing at t = 0 with |sin|, |cos| components
        const auto eq = principal_from_spin(heteroclinic_orbit(p, 0.0, id), p.theta);
        CHECK(std::abs(std::abs(eq.sx) - std::sin(vt)) < 1e-14);
        CHECK(std::abs(std::abs(eq.sy) - std::cos(vt)) < 1e-14);
        CHECK(eq.sz == 0.0);
        // H == 0 along the orbit
        for (double t : {-5.0, -1.0, 0.3, 2.0, 7.0})
            CHECK(std::abs(hamiltonian_eval(h, heteroclinic_orbit(p, t, id))) < 1e-12);
        // genuine solution of the flow
        for (double t : {-1.2, 0.0, 0.8}) {
            const auto d = oracle::numeric_derivative(
                [&](double u) { return heteroclinic_orbit(p, u, id); }, t);
            const auto r = eom_rhs(h, heteroclinic_orbit(p, t, id));
            CHECK(std::abs(d.sx - r.sx) < 1e-6);
            CHECK(std::abs(d.sy - r.sy) < 1e-6);
            CHECK(std::abs(d.sz - r.sz) < 1e-6);
        }
    }

    // L2 runs from +Mz to -Mz
    const auto late = heteroclinic_orbit(p, 25.0, HeteroclinicOrbitId::L2);
    CHECK(std::abs(late.sx) < 1e-12);
    CHECK(std::abs(late.sy) < 1e-12);
    CHECK(late.sz == doctest::Approx(-1.0).epsilon(1e-14));
    const auto early = heteroclinic_orbit(p, -25.0, HeteroclinicOrbitId::L2);
    CHECK(early.sz == doctest::Approx(1.0).epsilon(1e-14));

    // Jx == Jy gives the pi/4 angle
    CHECK(heteroclinic_angle(1.0, 1.0) == doctest::Approx(std::numbers::pi / 4));

    const auto pe = reduce_to_principal_axes({2.0, 1.0, 2.0});
    CHECK_THROWS_AS(heteroclinic_orbit(pe, 0.0, HeteroclinicOrbitId::L1), std::domain_error);
}

TEST_CASE("heteroclinic area: special values and quadrature cross-check") {
    CHECK(std::abs(heteroclinic_area(1.0, 1.0) - std::numbers::pi) < 1e-14);
    CHECK(std::abs(heteroclinic_area(1e-12, 1.0) - 2.0 * std::numbers::pi) < 1e-5);
    CHECK_THROWS_AS(heteroclinic_area(-1.0, 1.0), std::domain_error);

    const auto p = reduce_to_principal_axes({1.0, 2.0, 1.0});
    const double jx = p.Jx(), jy = p.Jy();
    // loop: L1 from -Mz to +Mz, then the mirror orbit with Mx > 0 back down;
    // the enclosed lune contains the +Mx principal axis
    std::vector<SpinVector> loop;
    const double t_max = 22.0;
    const int n = 4000;
    for (int i = 0; i <= n; ++i)
        loop.push_back(heteroclinic_orbit(p, -t_max + 2.0 * t_max * i / n, HeteroclinicOrbitId::L1));
    for (int i = 0; i <= n; ++i)
        loop.push_back(
            heteroclinic_orbit(p, -t_max + 2.0 * t_max * i / n, HeteroclinicOrbitId::L2Mirror));
    const SpinVector apex = spin_from_principal({1.0, 0.0, 0.0}, p.theta);
    const double measured = oracle::spherical_polygon_area(loop, apex);
    CHECK(std::abs(measured - heteroclinic_area(jx, jy)) < 1e-3);
}

TEST_CASE("oscillation periods: recurrence, limits, separatrix refusal") {
    const auto p = reduce_to_principal_axes({2.0, 1.0, 2.0});
    const auto b = energy_bounds(p);
    const double omega = std::sqrt(p.inv_ix * p.inv_iy);

    // small-H limit approaches the linearized precession period
    CHECK(oscillation_period(p, 1e-10) ==
          doctest::Approx(2.0 * std::numbers::pi / omega).epsilon(1e-8));

    // symmetric reduction (k == 0, K == pi/2): precession about z at rate
    // omega |Sz|, so T == 2 pi / (omega sqrt(1 - 2 H Ix))
    const auto ps = reduce_to_principal_axes({2.0, 0.0, 2.0});
    CHECK(oscillation_period(ps, 0.1) ==
          doctest::Approx(2.0 * std::numbers::pi / (2.0 * std::sqrt(0.9))).epsilon(1e-12));

    // monotone unbounded growth towards the separatrix
    double prev = 0.0;
    for (int j = 2; j <= 10; ++j) {
        const double T = oscillation_period(p, b.h_sep - std::pow(10.0, -j));
        CHECK(T > prev);
        prev = T;
    }
    CHECK(prev > 5.0 * oscillation_period(p, 0.5 * b.h_sep));
    CHECK(prev > 2.0 * oscillation_period(p, b.h_sep - 1e-2));

    CHECK_THROWS_AS(oscillation_period(p, b.h_sep), std::domain_error);

    // numeric recurrence |s(T) - s(0)| < 1e-8
    std::mt19937 rng(4);
    for (int i = 0; i < 5; ++i) {
        const auto rt = oracle::random_elliptic(rng);
        const auto bb = energy_bounds(rt.p);
        const double H = 0.55 * bb.h_sep;
        const double T = oscillation_period(rt.p, H);
        const auto tp = trajectory_params(rt.p, H);
        CHECK(distance(analytic_trajectory(tp, T), analytic_trajectory(tp, 0.0)) < 1e-8);
    }
}

TEST_CASE("phase alignment recovers on-orbit time offsets") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> dt(-8.0, 8.0);
    for (int i = 0; i < 8; ++i) {
        const auto rte = oracle::random_elliptic(rng);
        const auto be = energy_bounds(rte.p);
        for (double H : {0.4 * be.h_sep, be.h_sep + 0.55 * (be.h_max - be.h_sep)}) {
            const auto tp = trajectory_params(rte.p, H);
            const double t1 = dt(rng);
            const auto target = analytic_trajectory(tp, t1);
            const double t0 = time_offset_on_orbit(tp, target);
            CHECK(distance(analytic_trajectory(tp, t0), target) < 1e-8);
        }
        const auto rth = oracle::random_hyperbolic(rng);
        const auto bh = energy_bounds(rth.p);
        for (double H : {0.45 * bh.h_max, 0.5 * bh.h_min}) {
            const auto tp = trajectory_params(rth.p, H);
            const double t1 = dt(rng);
            const auto target = analytic_trajectory(tp, t1);
            const double t0 = time_offset_on_orbit(tp, target);
            CHECK(distance(analytic_trajectory(tp, t0), target) < 1e-8);
        }
    }
    // off-orbit point is rejected
    const auto p = reduce_to_principal_axes({2.0, 1.0, 2.0});
    const auto tp = trajectory_params(p, 0.3);
    CHECK_THROWS_AS(time_offset_on_orbit(tp, {0.0, 0.0, -1.0}), std::domain_error);
}

TEST_CASE("energy bound violations are rejected") {
    const auto p = reduce_to_principal_axes({2.0, 1.0, 2.0});
    CHECK_THROWS_AS(trajectory_params(p, 2.0), std::domain_error);
    CHECK_THROWS_AS(trajectory_params(p, -0.5), std::domain_error);
    const auto ph = reduce_to_principal_axes({1.0, 2.0, 1.0});
    CHECK_THROWS_AS(trajectory_params(ph, -0.7), std::domain_error);
}

TEST_CASE("endpoint energies degenerate to constant fixed-point trajectories") {
    const QuadraticSpinHamiltonian he{2.0, 1.0, 2.0};
    const QuadraticSpinHamiltonian hh{1.0, 2.0, 1.0};
    const auto pe = reduce_to_principal_axes(he);
    const auto be = energy_bounds(pe);
    const auto ph = reduce_to_principal_axes(hh);
    const auto bh = energy_bounds(ph);
    struct Case {
        QuadraticSpinHamiltonian h;
        TopParameters p;
        double H;
    } cases[] = {{he, pe, 0.0}, {he, pe, be.h_max}, {hh, ph, bh.h_max}, {hh, ph, bh.h_min}};
    for (const auto& c : cases) {
        const auto tp = trajectory_params(c.p, c.H);
        const auto s0 = analytic_trajectory(tp, 0.0);
        for (double t : {0.7, 3.1, 12.0})
            CHECK(distance(analytic_trajectory(tp, t), s0) < 1e-12);
        const auto rhs = eom_rhs(c.h, s0);
        CHECK(std::abs(rhs.sx) + std::abs(rhs.sy) + std::abs(rhs.sz) < 1e-12);
        CHECK(std::abs(s0.norm2() - 1.0) < 1e-12);
    }
}
