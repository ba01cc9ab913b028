// Timings of the OpenMP kernels against their serial reference versions.
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fiberspin/kernels.hpp"

namespace {

using namespace fiberspin;
using prop::Complex;
using clock_type = std::chrono::high_resolution_clock;

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

template <typename F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clock_type::now();
        f();
        best = std::min(best, ms_since(t0));
    }
    return best;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif

    std::mt19937 rng(1);
    std::normal_distribution<double> g(0.0, 0.7);

    // pointwise nonlinear split-step substep
    const std::size_t n = 1 << 20;
    std::vector<Complex> ux(n), uy(n);
    for (std::size_t i = 0; i < n; ++i) {
        ux[i] = Complex(g(rng), g(rng));
        uy[i] = Complex(g(rng), g(rng));
    }
    auto tet = symmetry::family_coefficients(symmetry::PointGroupFamily::Tet4_4bar_4m, 1.4, 0.5,
                                             0.2, -0.2, 0, 0);
    auto ux_s = ux, uy_s = uy, ux_p = ux, uy_p = uy;
    const double t_ser = best_of(3, [&] {
        kernels::nonlinear_step_serial(ux_s, uy_s, tet, 1e-3, true);
    });
    const double t_par = best_of(3, [&] {
        kernels::nonlinear_step(ux_p, uy_p, tet, 1e-3, true);
    });
    std::printf("nonlinear_step   n=%zu   serial %8.2f ms   parallel %8.2f ms   speedup %.2fx\n",
                n, t_ser, t_par, t_ser / t_par);

    // per-sample Stokes map
    std::vector<prop::StokesVector> stokes(n);
    const double s_ser = best_of(5, [&] { kernels::stokes_series_serial(ux, uy, stokes); });
    const double s_par = best_of(5, [&] { kernels::stokes_series(ux, uy, stokes); });
    std::printf("stokes_series    n=%zu   serial %8.2f ms   parallel %8.2f ms   speedup %.2fx\n",
                n, s_ser, s_par, s_ser / s_par);

    // batch trajectory sampling
    const auto p = spin::reduce_to_principal_axes({2.0, 1.0, 2.0});
    const auto tp = spin::trajectory_params(p, 0.4);
    const std::size_t m = 1 << 18;
    std::vector<spin::SpinVector> samples(m);
    const double j_ser = best_of(3, [&] {
        kernels::sample_trajectory_serial(tp, 0.0, 1e-4, samples);
    });
    const double j_par = best_of(3, [&] {
        kernels::sample_trajectory(tp, 0.0, 1e-4, samples);
    });
    std::printf("trajectory       n=%zu   serial %8.2f ms   parallel %8.2f ms   speedup %.2fx\n",
                m, j_ser, j_par, j_ser / j_par);
    return 0;
}
