#include "fiberspin/propagation.hpp"

#include <algorithm>
#include <cmath>

#include "fiberspin/fft.hpp"
#include "fiberspin/kernels.hpp"

namespace fiberspin::prop {

StokesVector stokes_map(Complex ux, Complex uy) {
    const Complex p = std::conj(ux) * uy;
    return {std::norm(ux) + std::norm(uy), 2.0 * p.real(), -2.0 * p.imag(),
            std::norm(ux) - std::norm(uy)};
}

CwState cw_derivative(const CMECoefficients& c, const CwState& s, bool include_fwm,
                      bool include_linear) {
    const Complex ux = s.ux, uy = s.uy;
    const double px = std::norm(ux), py = std::norm(uy);
    const Complex i_unit(0.0, 1.0);
    Complex rx = c.a_x * px * ux + c.b_x * 2.0 * py * ux + c.c_x * (2.0 * px * uy + ux * ux * std::conj(uy)) +
                 c.d_x * py * uy;
    Complex ry = c.a_y * py * uy + c.b_y * 2.0 * px * uy + c.c_y * (2.0 * py * ux + uy * uy * std::conj(ux)) +
                 c.d_y * px * ux;
    if (include_fwm) {
        rx += c.b_x * uy * uy * std::conj(ux);
        ry += c.b_y * ux * ux * std::conj(uy);
    }
    if (include_linear) {
        rx += 0.5 * c.xi_x() * ux;
        ry += 0.5 * c.xi_y() * uy;
    }
    return {i_unit * rx, i_unit * ry};
}

CwState cw_rk4_step(const CMECoefficients& c, const CwState& s, double dz, bool include_fwm,
                    bool include_linear) {
    auto f = [&](const CwState& q) { return cw_derivative(c, q, include_fwm, include_linear); };
    const CwState k1 = f(s);
    const CwState k2 = f({s.ux + 0.5 * dz * k1.ux, s.uy + 0.5 * dz * k1.uy});
    const CwState k3 = f({s.ux + 0.5 * dz * k2.ux, s.uy + 0.5 * dz * k2.uy});
    const CwState k4 = f({s.ux + dz * k3.ux, s.uy + dz * k3.uy});
    return {s.ux + dz / 6.0 * (k1.ux + 2.0 * k2.ux + 2.0 * k3.ux + k4.ux),
            s.uy + dz / 6.0 * (k1.uy + 2.0 * k2.uy + 2.0 * k3.uy + k4.uy)};
}

CwResult cw_evolve(const CMECoefficients& c, const CwState& u0, double z_end, double dz,
                   const CwOptions& options) {
    if (!(dz > 0.0)) throw std::domain_error("cw_evolve: dz must be positive");
    const auto n_steps = static_cast<std::size_t>(std::llround(z_end / dz));
    CwResult out;
    out.hamiltonian_tracked = static_cast<bool>(symmetry::hamiltonian_form_check(c));
    const double s0_init = stokes_map(u0.ux, u0.uy).s0;
    const double h_init =
        out.hamiltonian_tracked ? symmetry::homogeneous_hamiltonian_value(c, u0.ux, u0.uy) : 0.0;
    out.z.reserve(n_steps / options.store_stride + 2);
    out.states.reserve(n_steps / options.store_stride + 2);
    CwState s = u0;
    out.z.push_back(0.0);
    out.states.push_back(s);
    for (std::size_t i = 1; i <= n_steps; ++i) {
        s = cw_rk4_step(c, s, dz, options.include_fwm, options.include_linear);
        if (c.lossless() && s0_init > 0.0)
            out.max_power_drift = std::max(
                out.max_power_drift, std::abs(stokes_map(s.ux, s.uy).s0 - s0_init) / s0_init);
        if (out.hamiltonian_tracked && options.include_fwm && options.include_linear)
            out.max_hamiltonian_drift =
                std::max(out.max_hamiltonian_drift,
                         std::abs(symmetry::homogeneous_hamiltonian_value(c, s.ux, s.uy) - h_init));
        if (i % static_cast<std::size_t>(options.store_stride) == 0 || i == n_steps) {
            out.z.push_back(static_cast<double>(i) * dz);
            out.states.push_back(s);
        }
    }
    return out;
}

double FieldGrid::total_power() const {
    double p = 0.0;
    for (std::size_t i = 0; i < n; ++i) p += std::norm(ux[i]) + std::norm(uy[i]);
    return p * dtau;
}

StokesVector FieldGrid::integrated_stokes() const {
    StokesVector acc;
    for (std::size_t i = 0; i < n; ++i) {
        const StokesVector s = stokes_map(ux[i], uy[i]);
        acc.s0 += s.s0;
        acc.sx += s.sx;
        acc.sy += s.sy;
        acc.sz += s.sz;
    }
    acc.s0 *= dtau;
    acc.sx *= dtau;
    acc.sy *= dtau;
    acc.sz *= dtau;
    return acc;
}

FieldGrid make_grid(std::size_t n, double dtau) {
    if (!fft::is_power_of_two(n)) throw std::domain_error("make_grid: n must be a power of two");
    if (!(dtau > 0.0)) throw std::domain_error("make_grid: dtau must be positive");
    FieldGrid g;
    g.n = n;
    g.dtau = dtau;
    g.tau0 = -0.5 * static_cast<double>(n) * dtau;
    g.ux.assign(n, Complex(0.0, 0.0));
    g.uy.assign(n, Complex(0.0, 0.0));
    return g;
}

void fill_input_field(FieldGrid& grid, PulseShape shape, double power_x, double power_y,
                      double phase_y, double t0) {
    const double ax = std::sqrt(power_x);
    const Complex ay = std::sqrt(power_y) * std::exp(Complex(0.0, phase_y));
    for (std::size_t i = 0; i < grid.n; ++i) {
        double f = 1.0;
        if (shape != PulseShape::Cw) {
            const double x = grid.tau(i) / t0;
            f = shape == PulseShape::Gaussian ? std::exp(-0.5 * x * x) : 1.0 / std::cosh(x);
        }
        grid.ux[i] = ax * f;
        grid.uy[i] = ay * f;
    }
}

namespace {

// max spectral magnitude in the outer eighth of the band, relative to peak
double spectral_tail_level(std::vector<Complex> spec) {
    const std::size_t n = spec.size();
    double peak = 0.0;
    for (const auto& v : spec) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return 0.0;
    double tail = 0.0;
    const std::size_t lo = n * 7 / 16, hi = n * 9 / 16;  // around the Nyquist index n/2
    for (std::size_t m = lo; m < hi; ++m) tail = std::max(tail, std::abs(spec[m]));
    return tail / peak;
}

double grid_tail_level(const FieldGrid& g) {
    std::vector<Complex> sx = g.ux, sy = g.uy;
    fft::fft_inplace(sx);
    fft::fft_inplace(sy);
    return std::max(spectral_tail_level(std::move(sx)), spectral_tail_level(std::move(sy)));
}

}  // namespace

SplitStepResult split_step_propagate(
    const FieldGrid& grid, const PropagationParams& params,
    const std::function<void(double z, const FieldGrid&)>& checkpoint) {
    if (!(params.dz > 0.0)) throw std::domain_error("split_step_propagate: dz must be positive");
    if (!fft::is_power_of_two(grid.n) || grid.ux.size() != grid.n || grid.uy.size() != grid.n)
        throw std::domain_error("split_step_propagate: invalid grid");

    SplitStepResult out;
    out.grid = grid;
    const double b2x = params.beta2_x.value_or(params.beta2);
    const double b2y = params.beta2_y.value_or(params.beta2);
    const std::vector<double> w = fft::angular_frequencies(grid.n, grid.dtau);

    auto half_linear_factors = [&](double h) {
        std::pair<std::vector<Complex>, std::vector<Complex>> f;
        f.first.resize(grid.n);
        f.second.resize(grid.n);
        const Complex i_unit(0.0, 1.0);
        for (std::size_t m = 0; m < grid.n; ++m) {
            const double w2 = w[m] * w[m];
            f.first[m] = std::exp(i_unit * (0.5 * b2x * w2 + 0.5 * params.coeffs.xi_x()) * h);
            f.second[m] = std::exp(i_unit * (0.5 * b2y * w2 + 0.5 * params.coeffs.xi_y()) * h);
        }
        return f;
    };

    auto apply_linear = [&](FieldGrid& g, const std::vector<Complex>& fx,
                            const std::vector<Complex>& fy) {
        fft::fft_inplace(g.ux);
        fft::fft_inplace(g.uy);
        for (std::size_t m = 0; m < g.n; ++m) {
            g.ux[m] *= fx[m];
            g.uy[m] *= fy[m];
        }
        fft::ifft_inplace(g.ux);
        fft::ifft_inplace(g.uy);
    };

    const auto full_steps = static_cast<std::size_t>(params.z_end / params.dz);
    const double remainder = params.z_end - static_cast<double>(full_steps) * params.dz;
    const auto [fx, fy] = half_linear_factors(0.5 * params.dz);

    out.aliasing_level = grid_tail_level(out.grid);
    double z = 0.0;
    auto do_step = [&](double h, const std::vector<Complex>& hx, const std::vector<Complex>& hy) {
        apply_linear(out.grid, hx, hy);
        kernels::nonlinear_step(out.grid.ux, out.grid.uy, params.coeffs, h, params.include_fwm);
        apply_linear(out.grid, hx, hy);
        z += h;
        ++out.steps;
        if (checkpoint) checkpoint(z, out.grid);
    };
    for (std::size_t i = 0; i < full_steps; ++i) do_step(params.dz, fx, fy);
    if (remainder > 1e-12 * params.dz) {
        const auto [rx, ry] = half_linear_factors(0.5 * remainder);
        do_step(remainder, rx, ry);
    }
    out.aliasing_level = std::max(out.aliasing_level, grid_tail_level(out.grid));
    if (out.aliasing_level > 1e-8) {
        out.aliasing_warning = true;
        out.warnings.push_back("spectral tail exceeds 1e-8 of peak; enlarge the grid");
    }
    return out;
}

}  // namespace fiberspin::prop
