// Coupled-mode field propagation: the Stokes/Poincare map, CW evolution of
// the two-component cubic ODE, and symmetric split-step propagation of the
// dispersive equations on a retarded-time grid.

#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fiberspin/symmetry.hpp"

namespace fiberspin::prop {

using Complex = std::complex<double>;
using symmetry::CMECoefficients;

struct StokesVector {
    double s0 = 0.0, sx = 0.0, sy = 0.0, sz = 0.0;
};

/// Hopf map: S0 = |ux|^2 + |uy|^2, Sx = ux* uy + uy* ux,
/// Sy = i (ux* uy - uy* ux), Sz = |ux|^2 - |uy|^2.
StokesVector stokes_map(Complex ux, Complex uy);

struct CwState {
    Complex ux, uy;
};

struct CwOptions {
    bool include_fwm = true;     // keep the u_k^2 u_j* terms
    bool include_linear = true;  // keep the xi_j/2 terms
    int store_stride = 1;
};

/// du/dz for the two-component cubic ODE
///   i du_j/dz = -[ xi_j/2 u_j + a_j |u_j|^2 u_j + b_j (2 |u_k|^2 u_j
///                 + u_k^2 u_j*) + c_j (2 |u_j|^2 u_k + u_j^2 u_k*)
///                 + d_j |u_k|^2 u_k ].
CwState cw_derivative(const CMECoefficients& c, const CwState& s, bool include_fwm,
                      bool include_linear);

/// One classical RK4 step of the equation above.
CwState cw_rk4_step(const CMECoefficients& c, const CwState& s, double dz, bool include_fwm,
                    bool include_linear);

struct CwResult {
    std::vector<double> z;
    std::vector<CwState> states;
    double max_power_drift = 0.0;        // |S0(z) - S0(0)| / S0(0), lossless runs
    double max_hamiltonian_drift = 0.0;  // homogeneous Hamiltonian, gate-passing runs
    bool hamiltonian_tracked = false;
};

CwResult cw_evolve(const CMECoefficients& c, const CwState& u0, double z_end, double dz,
                   const CwOptions& options = {});

struct FieldGrid {
    std::size_t n = 0;   // power of two
    double tau0 = 0.0;   // retarded-time origin (s)
    double dtau = 0.0;   // sample spacing (s)
    std::vector<Complex> ux, uy;

    double tau(std::size_t i) const { return tau0 + static_cast<double>(i) * dtau; }
    /// Total power integral sum(|ux|^2 + |uy|^2) dtau.
    double total_power() const;
    /// dtau-weighted Stokes integrals over the grid.
    StokesVector integrated_stokes() const;
};

FieldGrid make_grid(std::size_t n, double dtau);  // centered, tau0 = -n/2 dtau

enum class PulseShape { Cw, Gaussian, Sech };

/// Fill ux = sqrt(Px) f(tau/t0), uy = sqrt(Py) e^{i phase_y} f(tau/t0)
/// with f = 1, exp(-x^2/2) or sech(x).
void fill_input_field(FieldGrid& grid, PulseShape shape, double power_x, double power_y,
                      double phase_y, double t0);

struct PropagationParams {
    double beta2 = 0.0;    // common GVD (s^2/m)
    CMECoefficients coeffs;
    double dz = 0.0;       // step (m)
    double z_end = 0.0;    // distance (m)
    std::optional<double> beta2_x;  // per-axis override
    std::optional<double> beta2_y;
    bool include_fwm = true;
};

struct SplitStepResult {
    FieldGrid grid;
    std::size_t steps = 0;
    bool aliasing_warning = false;
    double aliasing_level = 0.0;  // max spectral-tail magnitude relative to peak
    std::vector<std::string> warnings;
};

/// Symmetric split-step: half linear step in the spectral domain
/// (exp[(i beta2 omega^2/2 + i xi_j/2) dz/2]), full pointwise nonlinear
/// step via the RK4 kernel, half linear step. With beta2 = 0 and
/// delta_beta = 0 (lossless) it reduces to cw_evolve applied samplewise.
SplitStepResult split_step_propagate(
    const FieldGrid& grid, const PropagationParams& params,
    const std::function<void(double z, const FieldGrid&)>& checkpoint = nullptr);

}  // namespace fiberspin::prop
