// Data-parallel inner loops with serial reference versions. The parallel
// variants run the identical per-element code under OpenMP, so outputs
// match the serial versions bit for bit.

#pragma once

#include <span>

#include "fiberspin/propagation.hpp"
#include "fiberspin/spin_dynamics.hpp"

namespace fiberspin::kernels {

/// Pointwise nonlinear RK4 substep over a field grid (xi terms excluded;
/// they belong to the linear half-steps of the split-step scheme).
void nonlinear_step_serial(std::span<prop::Complex> ux, std::span<prop::Complex> uy,
                           const symmetry::CMECoefficients& c, double dz, bool include_fwm);
void nonlinear_step(std::span<prop::Complex> ux, std::span<prop::Complex> uy,
                    const symmetry::CMECoefficients& c, double dz, bool include_fwm);

/// Per-sample Stokes parameters of a field grid.
void stokes_series_serial(std::span<const prop::Complex> ux, std::span<const prop::Complex> uy,
                          std::span<prop::StokesVector> out);
void stokes_series(std::span<const prop::Complex> ux, std::span<const prop::Complex> uy,
                   std::span<prop::StokesVector> out);

/// Batch evaluation of an analytic trajectory at t0 + i dt.
void sample_trajectory_serial(const spin::EllipticTrajectoryParams& tp, double t0, double dt,
                              std::span<spin::SpinVector> out);
void sample_trajectory(const spin::EllipticTrajectoryParams& tp, double t0, double dt,
                       std::span<spin::SpinVector> out);

}  // namespace fiberspin::kernels
