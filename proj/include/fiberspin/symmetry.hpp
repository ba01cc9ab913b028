// Crystal point-group constraint tables for the transverse chi^(3)
// elements, the coupled-mode coefficient reduction, and the test for
// whether the coupled-mode equations derive from a Hamiltonian
// (nonlinear-Schroedinger form): b_x == b_y, d_y == c_x, d_x == c_y with
// vanishing losses.

#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fiberspin/spin_hamiltonian.hpp"

namespace fiberspin::symmetry {

enum class PointGroupFamily {
    Isotropic,
    Cubic23m3,            // 23, m3
    Cubic432_43m_m3m,     // 432, -43m, m3m
    Hex6_6bar_6m,         // 6, -6, 6/m
    Hex622_6mm_62m_6mmm,  // 622, 6mm, -62m, 6/mmm
    Trig3_3bar,           // 3, -3  (same table as the hexagonal 6-group)
    Trig32_3m_3barm,      // 32, 3m, -3m (isotropic table)
    Tet4_4bar_4m,         // 4, -4, 4/m
    Tet422_4mm_42m_4mmm,  // 422, 4mm, -42m, 4/mmm
    MonoTriclinicOrtho    // monoclinic / triclinic / orthorhombic: unconstrained
};

const char* to_string(PointGroupFamily f);
std::optional<PointGroupFamily> family_from_string(const std::string& name);
std::vector<PointGroupFamily> all_families();

/// Per-axis coupled-mode coefficients. xi_j = beta0j - beta0k + i alpha_j.
struct CMECoefficients {
    double a_x = 0.0, a_y = 0.0;  // SPM
    double b_x = 0.0, b_y = 0.0;  // XPM / FWM
    double c_x = 0.0, c_y = 0.0;  // unconventional mixing
    double d_x = 0.0, d_y = 0.0;  // cross-cubic
    double delta_beta = 0.0;      // beta0x - beta0y
    double alpha_x = 0.0, alpha_y = 0.0;  // losses, >= 0

    std::complex<double> xi_x() const { return {delta_beta, alpha_x}; }
    std::complex<double> xi_y() const { return {-delta_beta, alpha_y}; }
    bool lossless() const { return alpha_x == 0.0 && alpha_y == 0.0; }
};

/// Transverse chi^(3) elements chi_{jklm}, j..m in {x, y}. Indexed by two
/// bits per slot: chi(0,0,1,1) == chi_xxyy.
struct Chi3Table {
    double v[2][2][2][2] = {};
    double& operator()(int j, int k, int l, int m) { return v[j][k][l][m]; }
    double operator()(int j, int k, int l, int m) const { return v[j][k][l][m]; }
};

/// Reduce a chi^(3) table to coupled-mode coefficients:
///   a_j = g_jjjj, b_j = (g_jjkk + g_jkjk + g_jkkj)/3,
///   c_j = (g_jjkj + g_jkjj + g_jjjk)/3, d_j = g_jkkk,
/// with g_jklm = prefactor * chi_jklm (the fiber overlap-integral scale).
CMECoefficients coefficients_from_chi3(const Chi3Table& chi, double prefactor);

/// One symbolic relation among the coefficients, checkable numerically.
struct Constraint {
    std::string relation;  // e.g. "a_x = a_y" or "a = 3 b"
    std::function<double(const CMECoefficients&)> residual;
    std::function<double(const CMECoefficients&)> scale;  // magnitude for relative tolerance
};

struct ConstraintSet {
    PointGroupFamily family;
    std::vector<Constraint> constraints;
    /// Relations violated beyond relative tolerance 1e-12 (floor 1e-15).
    std::vector<std::string> violations(const CMECoefficients& c) const;
    bool satisfied(const CMECoefficients& c) const { return violations(c).empty(); }
};

/// The per-family equalities among (a_j, b_j, c_j, d_j).
ConstraintSet constraint_table(PointGroupFamily family);

/// Generic in-family coefficient set built from free parameters; used by
/// the truth-table checks and the CLI. Parameters that the family pins are
/// ignored (e.g. c for the isotropic family).
CMECoefficients family_coefficients(PointGroupFamily family, double a, double b, double c,
                                    double d, double a_y, double b_y);

/// Hamiltonian-form verdict. Pass requires b_x == b_y, d_y == c_x,
/// d_x == c_y and vanishing losses.
struct GateVerdict {
    bool passed = false;
    std::vector<std::string> violated;
    explicit operator bool() const { return passed; }
};

GateVerdict hamiltonian_form_check(const CMECoefficients& c);

/// Quadratic spin-Hamiltonian coefficients of the Stokes reduction
///   H = -1/2 [ delta_beta Sz + c0 S0^2 + cz Sz^2 + cx Sx^2 + 2 c Sz Sx ].
struct SpinHamiltonianCoeffs {
    double c0 = 0.0;
    double cz = 0.0;
    double cx = 0.0;
    double c_cross = 0.0;
    double delta_beta = 0.0;

    /// Stokes-space energy (per unit S0 normalization is the caller's).
    double energy(double s0, double sx, double sz) const;
    /// Matched quadratic spin Hamiltonian for the unit Poincare sphere,
    /// with axes relabeled (Sz, Sx, Sy) -> (Sx, Sy, Sz) and the rotor term
    /// dropped: (alpha, beta, gamma) = s0_total * (2 cz, 2 c, 2 cx).
    spin::QuadraticSpinHamiltonian matched_spin_hamiltonian(double s0_total) const;
};

/// Requires the gate to pass and the Stokes-reducible shape a_x == a_y,
/// c_y == -c_x; throws std::domain_error otherwise.
SpinHamiltonianCoeffs build_spin_hamiltonian(const CMECoefficients& c);

/// Value of the closed-form homogeneous Hamiltonian for gate-passing
/// coefficients:
///   -[ xi_x/2 |ux|^2 + xi_y/2 |uy|^2 + a_x/2 |ux|^4 + a_y/2 |uy|^4
///      + 2 b |ux|^2 |uy|^2 + (c_x |ux|^2 + c_y |uy|^2)(ux uy* + uy ux*)
///      + b/2 (ux^2 uy*^2 + uy^2 ux*^2) ]
double homogeneous_hamiltonian_value(const CMECoefficients& c, std::complex<double> ux,
                                     std::complex<double> uy);

}  // namespace fiberspin::symmetry
