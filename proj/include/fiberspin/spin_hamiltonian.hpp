// Quadratic classical spin Hamiltonian H = (alpha/2) Sx^2 + beta Sx Sy
// + (gamma/2) Sy^2 on the unit sphere |S| = 1, reduced to principal axes.
//
// The rotation used here is
//   Mx = cos(theta) Sx + sin(theta) Sy,
//   My = -sin(theta) Sx + cos(theta) Sy,   Mz = Sz,
// with theta = atan2(2 beta, alpha - gamma) / 2, which brings H to
// Mx^2/(2 Ix) + My^2/(2 Iy), 1/Ix >= 1/Iy. For alpha*gamma < beta^2 the
// second moment turns negative (inverted top): Jx = Ix, Jy = -Iy > 0.

#pragma once

#include <array>
#include <stdexcept>

namespace fiberspin::spin {

struct SpinVector {
    double sx = 0.0, sy = 0.0, sz = 0.0;
    double norm2() const { return sx * sx + sy * sy + sz * sz; }
};

struct QuadraticSpinHamiltonian {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

enum class Regime { Elliptic, Hyperbolic, Degenerate };

struct TopParameters {
    double theta = 0.0;      // principal-axis rotation angle
    Regime regime = Regime::Degenerate;
    double inv_ix = 0.0;     // 1/Ix = (alpha+gamma)/2 + R
    double inv_iy = 0.0;     // 1/Iy = (alpha+gamma)/2 - R

    double Ix() const { return 1.0 / inv_ix; }
    double Iy() const { return 1.0 / inv_iy; }
    // inverted-top parameters, valid in the hyperbolic regime
    double Jx() const { return 1.0 / inv_ix; }
    double Jy() const { return -1.0 / inv_iy; }
};

struct EnergyBounds {
    double h_min = 0.0;
    double h_sep = 0.0;  // separatrix energy (1/(2 Iy) elliptic, 0 hyperbolic)
    double h_max = 0.0;
};

enum class FixedPointAxis { PlusMx, MinusMx, PlusMy, MinusMy, PlusMz, MinusMz };
enum class Stability { Center, Saddle };

struct FixedPoint {
    FixedPointAxis axis;
    SpinVector location;  // in the original (Sx, Sy, Sz) frame
    double energy;
    Stability stability;
};

using FixedPointReport = std::array<FixedPoint, 6>;

const char* to_string(Regime r);
const char* to_string(FixedPointAxis a);
const char* to_string(Stability s);

TopParameters reduce_to_principal_axes(const QuadraticSpinHamiltonian& h);

/// Energy range of states on the unit sphere. Throws on the degenerate
/// regime alpha*gamma == beta^2.
EnergyBounds energy_bounds(const TopParameters& p);

/// Six fixed points +-Mx, +-My, +-Mz with energies and linear stability.
FixedPointReport fixed_points(const TopParameters& p);

double hamiltonian_eval(const QuadraticSpinHamiltonian& h, const SpinVector& s);

/// Frame changes associated with TopParameters::theta.
SpinVector principal_from_spin(const SpinVector& s, double theta);
SpinVector spin_from_principal(const SpinVector& m, double theta);

/// True when the elliptic-regime quadratic form is positive definite
/// (both principal moments positive); the trajectory formulas require it.
bool positive_definite(const TopParameters& p);

}  // namespace fiberspin::spin
