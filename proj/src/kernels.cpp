#include "fiberspin/kernels.hpp"

namespace fiberspin::kernels {

using prop::Complex;
using prop::CwState;

void nonlinear_step_serial(std::span<Complex> ux, std::span<Complex> uy,
                           const symmetry::CMECoefficients& c, double dz, bool include_fwm) {
    const auto n = static_cast<std::ptrdiff_t>(ux.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const CwState s = prop::cw_rk4_step(c, {ux[i], uy[i]}, dz, include_fwm, false);
        ux[i] = s.ux;
        uy[i] = s.uy;
    }
}

void nonlinear_step(std::span<Complex> ux, std::span<Complex> uy,
                    const symmetry::CMECoefficients& c, double dz, bool include_fwm) {
    const auto n = static_cast<std::ptrdiff_t>(ux.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const CwState s = prop::cw_rk4_step(c, {ux[i], uy[i]}, dz, include_fwm, false);
        ux[i] = s.ux;
        uy[i] = s.uy;
    }
}

void stokes_series_serial(std::span<const Complex> ux, std::span<const Complex> uy,
                          std::span<prop::StokesVector> out) {
    const auto n = static_cast<std::ptrdiff_t>(ux.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = prop::stokes_map(ux[i], uy[i]);
}

void stokes_series(std::span<const Complex> ux, std::span<const Complex> uy,
                   std::span<prop::StokesVector> out) {
    const auto n = static_cast<std::ptrdiff_t>(ux.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = prop::stokes_map(ux[i], uy[i]);
}

void sample_trajectory_serial(const spin::EllipticTrajectoryParams& tp, double t0, double dt,
                              std::span<spin::SpinVector> out) {
    const auto n = static_cast<std::ptrdiff_t>(out.size());
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[i] = spin::analytic_trajectory(tp, t0 + static_cast<double>(i) * dt);
}

void sample_trajectory(const spin::EllipticTrajectoryParams& tp, double t0, double dt,
                       std::span<spin::SpinVector> out) {
    const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[i] = spin::analytic_trajectory(tp, t0 + static_cast<double>(i) * dt);
}

}  // namespace fiberspin::kernels
