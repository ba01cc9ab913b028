#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fiberspin/spin_dynamics.hpp"
#include "fiberspin/spin_hamiltonian.hpp"

using namespace fiberspin::spin;

namespace {

SpinVector random_unit(std::mt19937& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    SpinVector s{g(rng), g(rng), g(rng)};
    const double inv = 1.0 / std::sqrt(s.norm2());
    return {s.sx * inv, s.sy * inv, s.sz * inv};
}

}  // namespace

TEST_CASE("reduction reproduces the elliptic reference parameters") {
    const auto p = reduce_to_principal_axes({2.0, 1.0, 2.0});
    CHECK(p.regime == Regime::Elliptic);
    CHECK(std::abs(p.Ix() - 1.0 / 3.0) < 1e-14);
    CHECK(std::abs(p.Iy() - 1.0) < 1e-14);
    CHECK(p.theta == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));

    const auto b = energy_bounds(p);
    CHECK(b.h_min == 0.0);
    CHECK(std::abs(b.h_sep - 0.5) < 1e-14);
    CHECK(std::abs(b.h_max - 1.5) < 1e-14);
}

TEST_CASE("reduction reproduces the hyperbolic reference parameters") {
    const auto p = reduce_to_principal_axes({1.0, 2.0, 1.0});
    CHECK(p.regime == Regime::Hyperbolic);
    CHECK(std::abs(p.Jx() - 1.0 / 3.0) < 1e-14);
    // the definitions give Jy = 1, consistent with the energy range below
    CHECK(std::abs(p.Jy() - 1.0) < 1e-14);

    const auto b = energy_bounds(p);
    CHECK(std::abs(b.h_min + 0.5) < 1e-14);
    CHECK(b.h_sep == 0.0);
    CHECK(std::abs(b.h_max - 1.5) < 1e-14);
}

TEST_CASE("symmetric form: Ix == Iy, theta == 0, coincident bounds") {
    const auto p = reduce_to_principal_axes({2.5, 0.0, 2.5});
    CHECK(p.theta == 0.0);
    CHECK(p.Ix() == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(p.Iy() == doctest::Approx(0.4).epsilon(1e-15));
    const auto b = energy_bounds(p);
    CHECK(b.h_sep == b.h_max);

    // theta branch at alpha == gamma
    CHECK(reduce_to_principal_axes({1.0, 0.7, 1.0}).theta ==
          doctest::Approx(std::numbers::pi / 4));
    CHECK(reduce_to_principal_axes({1.0, -0.7, 1.0}).theta ==
          doctest::Approx(-std::numbers::pi / 4));
}

TEST_CASE("regime boundary flips with the sign of alpha*gamma - beta^2") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> d(0.1, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const double alpha = d(rng), gamma = d(rng);
        const double b2 = alpha * gamma;
        const auto lo = reduce_to_principal_axes({alpha, std::sqrt(b2 - 1e-9), gamma});
        const auto hi = reduce_to_principal_axes({alpha, std::sqrt(b2 + 1e-9), gamma});
        CHECK(lo.regime == Regime::Elliptic);
        CHECK(hi.regime == Regime::Hyperbolic);
    }
    CHECK(reduce_to_principal_axes({2.0, 2.0, 2.0}).regime == Regime::Degenerate);
}

TEST_CASE("rotation by theta kills the cross term and matches eigenvalues") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int i = 0; i < 500; ++i) {
        const QuadraticSpinHamiltonian h{d(rng), d(rng), d(rng)};
        const auto p = reduce_to_principal_axes(h);
        // cross-term coefficient of the rotated form via polarization
        const SpinVector ex = spin_from_principal({1, 0, 0}, p.theta);
        const SpinVector ey = spin_from_principal({0, 1, 0}, p.theta);
        const SpinVector exy = spin_from_principal({std::sqrt(0.5), std::sqrt(0.5), 0}, p.theta);
        const double qx = 2.0 * hamiltonian_eval(h, ex);
        const double qy = 2.0 * hamiltonian_eval(h, ey);
        const double cross = 2.0 * hamiltonian_eval(h, exy) - 0.5 * (qx + qy);
        CHECK(std::abs(cross) < 1e-12);
        CHECK(qx == doctest::Approx(p.inv_ix).epsilon(1e-11));
        CHECK(qy == doctest::Approx(p.inv_iy).epsilon(1e-11));

        // eigenvalue identities
        CHECK(std::abs(p.inv_ix * p.inv_iy - (h.alpha * h.gamma - h.beta * h.beta)) <
              1e-12 * std::max(1.0, std::abs(h.alpha * h.gamma)));
        CHECK(std::abs(p.inv_ix + p.inv_iy - (h.alpha + h.gamma)) < 1e-12);
        CHECK(p.inv_ix >= p.inv_iy);  // Iy >= Ix as moments
    }
}

TEST_CASE("hamiltonian_eval basics and frame invariance") {
    const QuadraticSpinHamiltonian fig1{2.0, 1.0, 2.0};
    CHECK(hamiltonian_eval(fig1, {0.0, 0.0, 1.0}) == 0.0);

    // principal-frame state Mx = 1 carries the maximum energy 3/2
    const auto p = reduce_to_principal_axes(fig1);
    const SpinVector s = spin_from_principal({1.0, 0.0, 0.0}, p.theta);
    CHECK(hamiltonian_eval(fig1, s) == doctest::Approx(1.5).epsilon(1e-14));

    std::mt19937 rng(11);
    for (int i = 0; i < 200; ++i) {
        const SpinVector r = random_unit(rng);
        const SpinVector m = principal_from_spin(r, p.theta);
        const double direct = hamiltonian_eval(fig1, r);
        const double frame = 0.5 * p.inv_ix * m.sx * m.sx + 0.5 * p.inv_iy * m.sy * m.sy;
        CHECK(std::abs(direct - frame) < 1e-12);
        // round trip
        const SpinVector back = spin_from_principal(m, p.theta);
        CHECK(std::abs(back.sx - r.sx) < 1e-15);
        CHECK(std::abs(back.sy - r.sy) < 1e-15);
    }
}

TEST_CASE("fixed points: stability labels, energies, zero flow") {
    const auto check_fp = [](const QuadraticSpinHamiltonian& h) {
        const auto p = reduce_to_principal_axes(h);
        const auto report = fixed_points(p);
        for (const auto& fp : report) {
            const SpinVector rhs = eom_rhs(h, fp.location);
            CHECK(std::abs(rhs.sx) < 1e-13);
            CHECK(std::abs(rhs.sy) < 1e-13);
            CHECK(std::abs(rhs.sz) < 1e-13);
            CHECK(hamiltonian_eval(h, fp.location) == doctest::Approx(fp.energy).epsilon(1e-12));
        }
        // paired energies
        CHECK(report[0].energy == report[1].energy);
        CHECK(report[2].energy == report[3].energy);
        CHECK(report[4].energy == report[5].energy);
        return report;
    };

    const auto elliptic = check_fp({2.0, 1.0, 2.0});
    CHECK(elliptic[2].stability == Stability::Saddle);  // +-My
    CHECK(elliptic[3].stability == Stability::Saddle);
    CHECK(elliptic[2].energy == doctest::Approx(0.5));
    CHECK(elliptic[0].stability == Stability::Center);
    CHECK(elliptic[4].stability == Stability::Center);

    const auto hyperbolic = check_fp({1.0, 2.0, 1.0});
    CHECK(hyperbolic[4].stability == Stability::Saddle);  // +-Mz
    CHECK(hyperbolic[5].stability == Stability::Saddle);
    CHECK(hyperbolic[4].energy == 0.0);
    CHECK(hyperbolic[2].stability == Stability::Center);
    CHECK(hyperbolic[2].energy == doctest::Approx(-0.5));
}

TEST_CASE("degenerate regime is reported, not silently patched") {
    const auto p = reduce_to_principal_axes({1.0, 1.0, 1.0});
    CHECK(p.regime == Regime::Degenerate);
    CHECK_THROWS_AS(energy_bounds(p), std::domain_error);
    CHECK_THROWS_AS(fixed_points(p), std::domain_error);
}

TEST_CASE("Iy == Ix only at alpha == gamma, beta == 0") {
    const auto eq = reduce_to_principal_axes({1.7, 0.0, 1.7});
    CHECK(eq.inv_ix == eq.inv_iy);
    const auto ne1 = reduce_to_principal_axes({1.7, 1e-8, 1.7});
    CHECK(ne1.inv_ix > ne1.inv_iy);
    const auto ne2 = reduce_to_principal_axes({1.7, 0.0, 1.700001});
    CHECK(ne2.inv_ix > ne2.inv_iy);
}
