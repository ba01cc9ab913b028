// Step-index fiber quantities in the weakly guiding limit: the LP01
// fundamental mode (J0/K0 radial profile), the single-mode V threshold,
// the nonlinearity parameter from the mode-overlap integrals, and the
// characteristic length scales.

#pragma once

#include <stdexcept>

namespace fiberspin::fiber {

struct FiberGeometry {
    double core_radius = 0.0;  // a (m)
    double n1 = 0.0;           // core index
    double n_cladding = 0.0;   // nc < n1
    double lambda0 = 0.0;      // vacuum wavelength (m)

    double k0() const;  // 2 pi / lambda0
    double V() const;   // k0 a sqrt(n1^2 - nc^2)
    /// Relative index step (n1 - nc)/n1; the LP description assumes < 0.01.
    double index_contrast() const;
};

void validate(const FiberGeometry& g);

struct Lp01Mode {
    double V = 0.0;
    double u = 0.0;     // p a, core transverse parameter
    double w = 0.0;     // q a, cladding decay parameter
    double beta = 0.0;  // propagation constant
    double n_e = 0.0;   // beta / k0, nc <= n_e <= n1
    FiberGeometry geometry;

    double p() const { return u / geometry.core_radius; }
    double q() const { return w / geometry.core_radius; }
    /// Radial profile F(r), J0(pr)/J0(pa) inside, K0(qr)/K0(qa) outside;
    /// continuous with F(a) = 1.
    double profile(double r) const;
    /// Residual of the continuity condition u J1(u)/J0(u) - w K1(w)/K0(w).
    double continuity_residual() const;
};

/// Solve the LP01 continuity condition by bracketed bisection in
/// u in (0, min(V, j01)). Throws when no root exists in the bracket.
Lp01Mode lp01_solve(const FiberGeometry& g);

struct SingleModeReport {
    double V = 0.0;
    bool single_mode = false;  // V < 2.405
    bool weakly_guiding = false;
};

SingleModeReport single_mode_check(const FiberGeometry& g);

/// Wavelength where V crosses 2.405: 2 pi a sqrt(n1^2 - nc^2) / 2.405.
double cutoff_wavelength(const FiberGeometry& g);

/// gamma = (3 k0 / (8 n_e)) chi3_xxxx * int |F|^4 dA / int |F|^2 dA with
/// the radial quadrature refined to 1e-8 relative.
double gamma_parameter(const FiberGeometry& g, double chi3_xxxx, const Lp01Mode& mode);

struct LengthScales {
    double dispersion = 0.0;  // L_D = T0^2 / |beta2|
    double nonlinear = 0.0;   // L_NL = 1 / (gamma P0)
    double beat = 0.0;        // L_B = 2 pi / |delta_beta|
    bool dispersion_valid = false;
    bool nonlinear_valid = false;
    bool beat_valid = false;
    // telecom-scale advisories: the effect is negligible on fibers below
    // 50 km when the corresponding scale exceeds that length
    bool dispersion_negligible_50km = false;
    bool nonlinear_negligible_50km = false;
};

LengthScales length_scales(double p0, double t0, double beta2, double delta_beta, double gamma);

}  // namespace fiberspin::fiber
