#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "fiberspin/kernels.hpp"

using namespace fiberspin;
using prop::Complex;

namespace {

std::vector<Complex> random_field(std::mt19937& rng, std::size_t n) {
    std::normal_distribution<double> g(0.0, 0.7);
    std::vector<Complex> v(n);
    for (auto& x : v) x = Complex(g(rng), g(rng));
    return v;
}

}  // namespace

TEST_CASE("nonlinear step: parallel output is bit-identical to serial") {
    std::mt19937 rng(100);
    const std::size_t n = 8192;
    auto tet = symmetry::family_coefficients(symmetry::PointGroupFamily::Tet4_4bar_4m, 1.4, 0.5,
                                             0.2, -0.2, 0, 0);
    const auto ux0 = random_field(rng, n), uy0 = random_field(rng, n);

    auto ux_s = ux0, uy_s = uy0;
    kernels::nonlinear_step_serial(ux_s, uy_s, tet, 1e-3, true);
    auto ux_p = ux0, uy_p = uy0;
    kernels::nonlinear_step(ux_p, uy_p, tet, 1e-3, true);

    for (std::size_t i = 0; i < n; ++i) {
        CHECK(ux_s[i] == ux_p[i]);
        CHECK(uy_s[i] == uy_p[i]);
    }
    // and the step did something
    CHECK(std::abs(ux_s[0] - ux0[0]) > 0.0);
}

TEST_CASE("stokes series: parallel output is bit-identical to serial") {
    std::mt19937 rng(200);
    const std::size_t n = 4096;
    const auto ux = random_field(rng, n), uy = random_field(rng, n);
    std::vector<prop::StokesVector> a(n), b(n);
    kernels::stokes_series_serial(ux, uy, a);
    kernels::stokes_series(ux, uy, b);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(a[i].s0 == b[i].s0);
        CHECK(a[i].sx == b[i].sx);
        CHECK(a[i].sy == b[i].sy);
        CHECK(a[i].sz == b[i].sz);
    }
}

TEST_CASE("trajectory sampling: parallel output is bit-identical to serial") {
    const auto p = spin::reduce_to_principal_axes({2.0, 1.0, 2.0});
    const auto tp = spin::trajectory_params(p, 0.4);
    const std::size_t n = 20000;
    std::vector<spin::SpinVector> a(n), b(n);
    kernels::sample_trajectory_serial(tp, -3.0, 5e-4, a);
    kernels::sample_trajectory(tp, -3.0, 5e-4, b);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(a[i].sx == b[i].sx);
        CHECK(a[i].sy == b[i].sy);
        CHECK(a[i].sz == b[i].sz);
    }
}
