// Exact elliptic-function spin trajectories for the quadratic Hamiltonian
// H = (alpha/2) Sx^2 + beta Sx Sy + (gamma/2) Sy^2, a fixed-step RK4
// integrator for cross-validation, separatrix/heteroclinic orbits, periods
// and the heteroclinic-area formula.
//
// Equations of motion ({Si, Sj} = eps_ijk Sk):
//   Sx' = (beta Sx + gamma Sy) Sz
//   Sy' = -(beta Sy + alpha Sx) Sz
//   Sz' = (alpha - gamma) Sx Sy + beta (Sy^2 - Sx^2)
//
// Branch formulas evaluate in the principal frame and rotate back. The
// canonical trajectories start at t = 0 from My = 0 (elliptic branches) or
// Mz = 0 (hyperbolic branches); mirror copies (pi rotations about the
// principal axes, which are symmetries of the flow) select the remaining
// orbit families.

#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "fiberspin/elliptic.hpp"
#include "fiberspin/spin_hamiltonian.hpp"

namespace fiberspin::spin {

SpinVector eom_rhs(const QuadraticSpinHamiltonian& h, const SpinVector& s);

struct NumericTrajectoryOptions {
    bool renormalize = false;  // project back to |s| = 1 after each step
    double max_drift = std::numeric_limits<double>::infinity();
    int store_stride = 1;      // keep every n-th sample
};

struct NumericTrajectory {
    std::vector<double> t;
    std::vector<SpinVector> s;
    double max_norm_drift = 0.0;    // max |s|^2 - 1 over the run
    double max_energy_drift = 0.0;  // max |H(s) - H(s0)| over the run
};

/// Classical fixed-step 4th-order integration of eom_rhs. Throws when the
/// measured drift exceeds options.max_drift (reduce dt).
NumericTrajectory numeric_trajectory(const QuadraticSpinHamiltonian& h, const SpinVector& s0,
                                     double t_end, double dt,
                                     const NumericTrajectoryOptions& options = {});

enum class TrajectoryBranch {
    EllipticLow,    // elliptic regime, 2 H Iy <= 1
    EllipticHigh,   // elliptic regime, 2 H Iy >= 1
    Separatrix,     // elliptic regime, 2 H Iy == 1
    HyperbolicPos,  // hyperbolic regime, H >= 0
    HyperbolicNeg,  // hyperbolic regime, H <= 0
    Heteroclinic    // hyperbolic regime, H == 0
};

const char* to_string(TrajectoryBranch b);

enum class OrbitMirror { None, AboutMx, AboutMy, AboutMz };

struct EllipticTrajectoryParams {
    TrajectoryBranch branch;
    elliptic::EllipticModulus modulus{0.0, 1.0};
    double rate = 0.0;             // lambda, kappa, xi, rho or Omega
    double amplitude_param = 0.0;  // a, theta or theta_1 (elliptic argument)
    double theta_frame = 0.0;
    double energy = 0.0;
    double amp_x = 0.0, amp_y = 0.0, amp_z = 0.0;  // principal-frame amplitudes
    double quarter_period = 0.0;   // K(modulus.k); +inf on separatrix branches
    OrbitMirror mirror = OrbitMirror::None;
};

/// Branch dispatch and parameter computation for energy H inside the
/// bounds. Throws for the degenerate regime or H outside bounds.
EllipticTrajectoryParams trajectory_params(const TopParameters& p, double H,
                                           OrbitMirror mirror = OrbitMirror::None);

SpinVector analytic_trajectory(const EllipticTrajectoryParams& tp, double t);
SpinVector analytic_trajectory(const TopParameters& p, double H, double t);

enum class HeteroclinicOrbitId {
    L1,        // Mx > 0, My > 0 at the equator; runs to +Mz
    L2,        // Mx < 0, My > 0 at the equator; runs to -Mz
    L1Mirror,  // Mx < 0, My < 0; runs to +Mz
    L2Mirror   // Mx > 0, My < 0; runs to -Mz
};

/// Heteroclinic orbits of the hyperbolic regime (H = 0) connecting the
/// saddles at Mz = +-1. sin(theta_het) = sqrt(Jx/(Jx+Jy)).
SpinVector heteroclinic_orbit(const TopParameters& p, double t, HeteroclinicOrbitId orbit);

/// Angle parameter of the heteroclinic orbits, theta_het above.
double heteroclinic_angle(double jx, double jy);

/// Area on the unit sphere enclosed by the orbit pair l1, l2:
/// 2 pi - 4 arctan(sqrt(Jx/Jy)).
double heteroclinic_area(double jx, double jy);

/// Full-state recurrence period 4 K / rate. Throws on the separatrix and
/// heteroclinic branches (infinite period) and at fixed-point energies.
double oscillation_period(const TopParameters& p, double H);

/// Time offset t0 with analytic_trajectory(tp, t0) == s (phase alignment
/// for arbitrary on-orbit starting points). The target must lie on the
/// orbit selected by tp (branch + mirror); throws otherwise.
double time_offset_on_orbit(const EllipticTrajectoryParams& tp, const SpinVector& s);

}  // namespace fiberspin::spin
