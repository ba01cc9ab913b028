#include "fiberspin/symmetry.hpp"

#include <cmath>

namespace fiberspin::symmetry {

namespace {

constexpr double kRelTol = 1e-12;
constexpr double kAbsFloor = 1e-15;

bool close(double lhs, double rhs, double scale) {
    return std::abs(lhs - rhs) <= std::max(kAbsFloor, kRelTol * std::max(std::abs(scale), 1.0));
}

Constraint equal(std::string relation, double CMECoefficients::* lhs,
                 double CMECoefficients::* rhs) {
    return {std::move(relation),
            [lhs, rhs](const CMECoefficients& c) { return c.*lhs - c.*rhs; },
            [lhs, rhs](const CMECoefficients& c) {
                return std::max(std::abs(c.*lhs), std::abs(c.*rhs));
            }};
}

Constraint opposite(std::string relation, double CMECoefficients::* lhs,
                    double CMECoefficients::* rhs) {
    return {std::move(relation),
            [lhs, rhs](const CMECoefficients& c) { return c.*lhs + c.*rhs; },
            [lhs, rhs](const CMECoefficients& c) {
                return std::max(std::abs(c.*lhs), std::abs(c.*rhs));
            }};
}

Constraint zero(std::string relation, double CMECoefficients::* f) {
    return {std::move(relation), [f](const CMECoefficients& c) { return c.*f; },
            [](const CMECoefficients&) { return 1.0; }};
}

Constraint triple(std::string relation, double CMECoefficients::* lhs,
                  double CMECoefficients::* rhs) {  // lhs = 3 rhs
    return {std::move(relation),
            [lhs, rhs](const CMECoefficients& c) { return c.*lhs - 3.0 * c.*rhs; },
            [lhs, rhs](const CMECoefficients& c) {
                return std::max(std::abs(c.*lhs), 3.0 * std::abs(c.*rhs));
            }};
}

void append_isotropic(std::vector<Constraint>& v) {
    v.push_back(equal("a_x = a_y", &CMECoefficients::a_x, &CMECoefficients::a_y));
    v.push_back(equal("b_x = b_y", &CMECoefficients::b_x, &CMECoefficients::b_y));
    v.push_back(triple("a = 3 b", &CMECoefficients::a_x, &CMECoefficients::b_x));
    v.push_back(zero("c_x = 0", &CMECoefficients::c_x));
    v.push_back(zero("c_y = 0", &CMECoefficients::c_y));
    v.push_back(zero("d_x = 0", &CMECoefficients::d_x));
    v.push_back(zero("d_y = 0", &CMECoefficients::d_y));
}

void append_cubic_minor(std::vector<Constraint>& v) {  // 432-group / 422-group table
    v.push_back(equal("a_x = a_y", &CMECoefficients::a_x, &CMECoefficients::a_y));
    v.push_back(equal("b_x = b_y", &CMECoefficients::b_x, &CMECoefficients::b_y));
    v.push_back(zero("c_x = 0", &CMECoefficients::c_x));
    v.push_back(zero("c_y = 0", &CMECoefficients::c_y));
    v.push_back(zero("d_x = 0", &CMECoefficients::d_x));
    v.push_back(zero("d_y = 0", &CMECoefficients::d_y));
}

void append_hexagonal(std::vector<Constraint>& v) {  // 6-group / trigonal 3-group table
    v.push_back(equal("a_x = a_y", &CMECoefficients::a_x, &CMECoefficients::a_y));
    v.push_back(equal("b_x = b_y", &CMECoefficients::b_x, &CMECoefficients::b_y));
    v.push_back(triple("a = 3 b", &CMECoefficients::a_x, &CMECoefficients::b_x));
    v.push_back(opposite("c_x = -c_y", &CMECoefficients::c_x, &CMECoefficients::c_y));
    v.push_back(opposite("d_x = -d_y", &CMECoefficients::d_x, &CMECoefficients::d_y));
    v.push_back(triple("d = 3 c", &CMECoefficients::d_x, &CMECoefficients::c_x));
}

void append_tetragonal(std::vector<Constraint>& v) {  // 4-group table
    v.push_back(equal("a_x = a_y", &CMECoefficients::a_x, &CMECoefficients::a_y));
    v.push_back(equal("b_x = b_y", &CMECoefficients::b_x, &CMECoefficients::b_y));
    v.push_back(opposite("c_x = -c_y", &CMECoefficients::c_x, &CMECoefficients::c_y));
    v.push_back(opposite("d_x = -d_y", &CMECoefficients::d_x, &CMECoefficients::d_y));
}

}  // namespace

const char* to_string(PointGroupFamily f) {
    switch (f) {
        case PointGroupFamily::Isotropic: return "isotropic";
        case PointGroupFamily::Cubic23m3: return "cubic_23_m3";
        case PointGroupFamily::Cubic432_43m_m3m: return "cubic_432_43m_m3m";
        case PointGroupFamily::Hex6_6bar_6m: return "hex_6_6bar_6m";
        case PointGroupFamily::Hex622_6mm_62m_6mmm: return "hex_622_6mm_62m_6mmm";
        case PointGroupFamily::Trig3_3bar: return "trig_3_3bar";
        case PointGroupFamily::Trig32_3m_3barm: return "trig_32_3m_3barm";
        case PointGroupFamily::Tet4_4bar_4m: return "tet_4_4bar_4m";
        case PointGroupFamily::Tet422_4mm_42m_4mmm: return "tet_422_4mm_42m_4mmm";
        case PointGroupFamily::MonoTriclinicOrtho: return "mono_tri_ortho";
    }
    return "?";
}

std::vector<PointGroupFamily> all_families() {
    return {PointGroupFamily::Isotropic,
            PointGroupFamily::Cubic23m3,
            PointGroupFamily::Cubic432_43m_m3m,
            PointGroupFamily::Hex6_6bar_6m,
            PointGroupFamily::Hex622_6mm_62m_6mmm,
            PointGroupFamily::Trig3_3bar,
            PointGroupFamily::Trig32_3m_3barm,
            PointGroupFamily::Tet4_4bar_4m,
            PointGroupFamily::Tet422_4mm_42m_4mmm,
            PointGroupFamily::MonoTriclinicOrtho};
}

std::optional<PointGroupFamily> family_from_string(const std::string& name) {
    for (PointGroupFamily f : all_families())
        if (name == to_string(f)) return f;
    return std::nullopt;
}

CMECoefficients coefficients_from_chi3(const Chi3Table& chi, double prefactor) {
    CMECoefficients c;
    auto g = [&](int j, int k, int l, int m) { return prefactor * chi(j, k, l, m); };
    constexpr int x = 0, y = 1;
    c.a_x = g(x, x, x, x);
    c.a_y = g(y, y, y, y);
    c.b_x = (g(x, x, y, y) + g(x, y, x, y) + g(x, y, y, x)) / 3.0;
    c.b_y = (g(y, y, x, x) + g(y, x, y, x) + g(y, x, x, y)) / 3.0;
    c.c_x = (g(x, x, y, x) + g(x, y, x, x) + g(x, x, x, y)) / 3.0;
    c.c_y = (g(y, y, x, y) + g(y, x, y, y) + g(y, y, y, x)) / 3.0;
    c.d_x = g(x, y, y, y);
    c.d_y = g(y, x, x, x);
    return c;
}

std::vector<std::string> ConstraintSet::violations(const CMECoefficients& c) const {
    std::vector<std::string> out;
    for (const Constraint& k : constraints)
        if (!close(k.residual(c), 0.0, k.scale(c))) out.push_back(k.relation);
    return out;
}

ConstraintSet constraint_table(PointGroupFamily family) {
    ConstraintSet set;
    set.family = family;
    switch (family) {
        case PointGroupFamily::Isotropic:
        case PointGroupFamily::Hex622_6mm_62m_6mmm:
        case PointGroupFamily::Trig32_3m_3barm:
            append_isotropic(set.constraints);
            break;
        case PointGroupFamily::Cubic23m3:
            // b_x and b_y stay independent
            set.constraints.push_back(
                equal("a_x = a_y", &CMECoefficients::a_x, &CMECoefficients::a_y));
            set.constraints.push_back(zero("c_x = 0", &CMECoefficients::c_x));
            set.constraints.push_back(zero("c_y = 0", &CMECoefficients::c_y));
            set.constraints.push_back(zero("d_x = 0", &CMECoefficients::d_x));
            set.constraints.push_back(zero("d_y = 0", &CMECoefficients::d_y));
            break;
        case PointGroupFamily::Cubic432_43m_m3m:
        case PointGroupFamily::Tet422_4mm_42m_4mmm:
            append_cubic_minor(set.constraints);
            break;
        case PointGroupFamily::Hex6_6bar_6m:
        case PointGroupFamily::Trig3_3bar:
            append_hexagonal(set.constraints);
            break;
        case PointGroupFamily::Tet4_4bar_4m:
            append_tetragonal(set.constraints);
            break;
        case PointGroupFamily::MonoTriclinicOrtho:
            break;  // unconstrained
    }
    return set;
}

CMECoefficients family_coefficients(PointGroupFamily family, double a, double b, double c,
                                    double d, double a_y, double b_y) {
    CMECoefficients out;
    switch (family) {
        case PointGroupFamily::Isotropic:
        case PointGroupFamily::Hex622_6mm_62m_6mmm:
        case PointGroupFamily::Trig32_3m_3barm:
            out.a_x = out.a_y = a;
            out.b_x = out.b_y = a / 3.0;
            break;
        case PointGroupFamily::Cubic23m3:
            out.a_x = out.a_y = a;
            out.b_x = b;
            out.b_y = b_y;
            break;
        case PointGroupFamily::Cubic432_43m_m3m:
        case PointGroupFamily::Tet422_4mm_42m_4mmm:
            out.a_x = out.a_y = a;
            out.b_x = out.b_y = b;
            break;
        case PointGroupFamily::Hex6_6bar_6m:
        case PointGroupFamily::Trig3_3bar:
            out.a_x = out.a_y = a;
            out.b_x = out.b_y = a / 3.0;
            out.c_x = c;
            out.c_y = -c;
            out.d_x = 3.0 * c;
            out.d_y = -3.0 * c;
            break;
        case PointGroupFamily::Tet4_4bar_4m:
            out.a_x = out.a_y = a;
            out.b_x = out.b_y = b;
            out.c_x = c;
            out.c_y = -c;
            out.d_x = d;
            out.d_y = -d;
            break;
        case PointGroupFamily::MonoTriclinicOrtho:
            out.a_x = a;
            out.a_y = a_y;
            out.b_x = b;
            out.b_y = b_y;
            out.c_x = c;
            out.c_y = 0.7 * c;
            out.d_x = d;
            out.d_y = 1.3 * d;
            break;
    }
    return out;
}

GateVerdict hamiltonian_form_check(const CMECoefficients& c) {
    GateVerdict v;
    if (!close(c.b_x, c.b_y, std::max(std::abs(c.b_x), std::abs(c.b_y))))
        v.violated.push_back("b_x = b_y");
    if (!close(c.d_y, c.c_x, std::max(std::abs(c.d_y), std::abs(c.c_x))))
        v.violated.push_back("d_y = c_x");
    if (!close(c.d_x, c.c_y, std::max(std::abs(c.d_x), std::abs(c.c_y))))
        v.violated.push_back("d_x = c_y");
    if (!c.lossless()) v.violated.push_back("alpha_x = alpha_y = 0");
    v.passed = v.violated.empty();
    return v;
}

double SpinHamiltonianCoeffs::energy(double s0, double sx, double sz) const {
    return -0.5 * (delta_beta * sz + c0 * s0 * s0 + cz * sz * sz + cx * sx * sx +
                   2.0 * c_cross * sz * sx);
}

spin::QuadraticSpinHamiltonian SpinHamiltonianCoeffs::matched_spin_hamiltonian(
    double s0_total) const {
    return {2.0 * s0_total * cz, 2.0 * s0_total * c_cross, 2.0 * s0_total * cx};
}

SpinHamiltonianCoeffs build_spin_hamiltonian(const CMECoefficients& c) {
    const GateVerdict gate = hamiltonian_form_check(c);
    if (!gate) {
        std::string msg = "build_spin_hamiltonian: no Hamiltonian form;";
        for (const auto& s : gate.violated) msg += " " + s + ";";
        throw std::domain_error(msg);
    }
    if (!close(c.a_x, c.a_y, std::max(std::abs(c.a_x), std::abs(c.a_y))))
        throw std::domain_error("build_spin_hamiltonian: requires a_x == a_y");
    if (!close(c.c_x, -c.c_y, std::max(std::abs(c.c_x), std::abs(c.c_y))))
        throw std::domain_error("build_spin_hamiltonian: requires c_y == -c_x");
    const double a = c.a_x;
    const double b = 0.5 * (c.b_x + c.b_y);
    SpinHamiltonianCoeffs out;
    out.c0 = 0.5 * (a + b);
    out.cz = 0.5 * (a - b);
    out.cx = b;
    out.c_cross = c.c_x;
    out.delta_beta = c.delta_beta;
    return out;
}

double homogeneous_hamiltonian_value(const CMECoefficients& c, std::complex<double> ux,
                                     std::complex<double> uy) {
    const double px = std::norm(ux), py = std::norm(uy);
    const double b = 0.5 * (c.b_x + c.b_y);
    const double sx = 2.0 * (std::conj(ux) * uy).real();
    const std::complex<double> fwm = ux * ux * std::conj(uy) * std::conj(uy);
    return -(0.5 * c.delta_beta * px - 0.5 * c.delta_beta * py + 0.5 * c.a_x * px * px +
             0.5 * c.a_y * py * py + 2.0 * b * px * py + (c.c_x * px + c.c_y * py) * sx +
             b * fwm.real());
}

}  // namespace fiberspin::symmetry
