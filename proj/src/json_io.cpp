#include "fiberspin/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "fiberspin/fiber_mode.hpp"
#include "fiberspin/kernels.hpp"
#include "fiberspin/propagation.hpp"
#include "fiberspin/selftest.hpp"
#include "fiberspin/spin_dynamics.hpp"
#include "fiberspin/spin_hamiltonian.hpp"
#include "fiberspin/symmetry.hpp"

namespace fiberspin::cli {

namespace {

void check_finite_recursive(const json& j, const std::string& path) {
    if (j.is_number_float() && !std::isfinite(j.get<double>()))
        throw SchemaError("non-finite number at " + (path.empty() ? "<root>" : path));
    if (j.is_object())
        for (const auto& [key, value] : j.items())
            check_finite_recursive(value, path.empty() ? key : path + "." + key);
    if (j.is_array())
        for (std::size_t i = 0; i < j.size(); ++i)
            check_finite_recursive(j[i], path + "[" + std::to_string(i) + "]");
}

// Strict accessor: every key of the underlying object must be touched by
// one of the accessors before done(), otherwise the config is rejected.
class ConfigView {
public:
    ConfigView(const json& j, std::string path) : j_(&j), path_(std::move(path)) {
        if (!j.is_object()) throw SchemaError(path_ + " must be a JSON object");
    }

    bool has(const char* key) const {
        recognized_.insert(key);
        return j_->contains(key);
    }

    double number(const char* key) const {
        require(key);
        return read_number(key);
    }

    double number_or(const char* key, double fallback) const {
        recognized_.insert(key);
        return j_->contains(key) ? read_number(key) : fallback;
    }

    long integer(const char* key) const {
        require(key);
        return read_integer(key);
    }

    long integer_or(const char* key, long fallback) const {
        recognized_.insert(key);
        return j_->contains(key) ? read_integer(key) : fallback;
    }

    std::string str(const char* key) const {
        require(key);
        return read_string(key);
    }

    std::string str_or(const char* key, const std::string& fallback) const {
        recognized_.insert(key);
        return j_->contains(key) ? read_string(key) : fallback;
    }

    bool flag_or(const char* key, bool fallback) const {
        recognized_.insert(key);
        if (!j_->contains(key)) return fallback;
        const json& v = (*j_)[key];
        if (!v.is_boolean()) throw SchemaError(dotted(key) + " must be a boolean");
        return v.get<bool>();
    }

    std::vector<double> number_array(const char* key, std::size_t n) const {
        require(key);
        const json& v = (*j_)[key];
        if (!v.is_array() || v.size() != n)
            throw SchemaError(dotted(key) + " must be an array of " + std::to_string(n) +
                              " numbers");
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number()) throw SchemaError(dotted(key) + " must contain numbers only");
            out.push_back(x.get<double>());
        }
        return out;
    }

    ConfigView child(const char* key) const {
        require(key);
        return ConfigView((*j_)[key], dotted(key));
    }

    void done() const {
        for (const auto& [key, value] : j_->items())
            if (!recognized_.count(key))
                throw SchemaError("unknown key '" + dotted(key.c_str()) + "'");
    }

private:
    void require(const char* key) const {
        recognized_.insert(key);
        if (!j_->contains(key)) throw SchemaError("missing required key '" + dotted(key) + "'");
    }
    std::string dotted(const char* key) const {
        return path_.empty() ? key : path_ + "." + key;
    }
    double read_number(const char* key) const {
        const json& v = (*j_)[key];
        if (!v.is_number()) throw SchemaError(dotted(key) + " must be a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw SchemaError(dotted(key) + " must be finite");
        return x;
    }
    long read_integer(const char* key) const {
        const json& v = (*j_)[key];
        if (!v.is_number_integer()) throw SchemaError(dotted(key) + " must be an integer");
        return v.get<long>();
    }
    std::string read_string(const char* key) const {
        const json& v = (*j_)[key];
        if (!v.is_string()) throw SchemaError(dotted(key) + " must be a string");
        return v.get<std::string>();
    }

    const json* j_;
    std::string path_;
    mutable std::set<std::string> recognized_;
};

// tabular output with deterministic rendering in both formats
struct Cell {
    bool numeric = true;
    double num = 0.0;
    std::string str;

    static Cell of(double v) { return {true, v, {}}; }
    static Cell of(std::string s) { return {false, 0.0, std::move(s)}; }
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string table_to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        out += t.columns[i];
        out += i + 1 < t.columns.size() ? ',' : '\n';
    }
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += row[i].numeric ? format_double(row[i].num) : row[i].str;
            out += i + 1 < row.size() ? ',' : '\n';
        }
    }
    return out;
}

std::string table_to_json(const Table& t) {
    json out;
    out["columns"] = t.columns;
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::array();
        for (const auto& c : row) {
            if (c.numeric)
                r.push_back(c.num);
            else
                r.push_back(c.str);
        }
        rows.push_back(std::move(r));
    }
    out["rows"] = std::move(rows);
    return out.dump(2) + "\n";
}

std::string emit(const Table& t, Format f) {
    return f == Format::Json ? table_to_json(t) : table_to_csv(t);
}

void flatten_json(const json& j, const std::string& prefix, Table& t) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items())
            flatten_json(value, prefix.empty() ? key : prefix + "." + key, t);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten_json(j[i], prefix + "[" + std::to_string(i) + "]", t);
    } else {
        std::vector<Cell> row{Cell::of(prefix)};
        if (j.is_number())
            row.push_back(Cell::of(j.get<double>()));
        else if (j.is_boolean())
            row.push_back(Cell::of(std::string(j.get<bool>() ? "true" : "false")));
        else if (j.is_null())
            row.push_back(Cell::of(std::string()));
        else
            row.push_back(Cell::of(j.get<std::string>()));
        t.rows.push_back(std::move(row));
    }
}

std::string emit_report(const json& report, Format f) {
    if (f == Format::Csv) {
        Table t;
        t.columns = {"key", "value"};
        flatten_json(report, "", t);
        return table_to_csv(t);
    }
    return report.dump(2) + "\n";
}

symmetry::CMECoefficients parse_coefficients(const ConfigView& root) {
    symmetry::CMECoefficients c;
    if (root.has("coefficients")) {
        const ConfigView v = root.child("coefficients");
        c.a_x = v.number("a_x");
        c.a_y = v.number("a_y");
        c.b_x = v.number("b_x");
        c.b_y = v.number("b_y");
        c.c_x = v.number_or("c_x", 0.0);
        c.c_y = v.number_or("c_y", 0.0);
        c.d_x = v.number_or("d_x", 0.0);
        c.d_y = v.number_or("d_y", 0.0);
        c.delta_beta = v.number_or("delta_beta", 0.0);
        c.alpha_x = v.number_or("alpha_x", 0.0);
        c.alpha_y = v.number_or("alpha_y", 0.0);
        v.done();
    } else if (root.has("chi3")) {
        const ConfigView v = root.child("chi3");
        symmetry::Chi3Table chi;
        const char axes[] = {'x', 'y'};
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    for (int m = 0; m < 2; ++m) {
                        const char key[5] = {axes[j], axes[k], axes[l], axes[m], '\0'};
                        chi(j, k, l, m) = v.number_or(key, 0.0);
                    }
        v.done();
        c = symmetry::coefficients_from_chi3(chi, root.number_or("prefactor", 1.0));
        c.delta_beta = root.number_or("delta_beta", 0.0);
        c.alpha_x = root.number_or("alpha_x", 0.0);
        c.alpha_y = root.number_or("alpha_y", 0.0);
    } else {
        throw SchemaError("config needs either 'coefficients' or 'chi3'");
    }
    if (c.alpha_x < 0.0 || c.alpha_y < 0.0)
        throw SchemaError("losses alpha_x, alpha_y must be non-negative");
    return c;
}

json coefficients_to_json(const symmetry::CMECoefficients& c) {
    return {{"a_x", c.a_x},   {"a_y", c.a_y},   {"b_x", c.b_x},
            {"b_y", c.b_y},   {"c_x", c.c_x},   {"c_y", c.c_y},
            {"d_x", c.d_x},   {"d_y", c.d_y},   {"delta_beta", c.delta_beta},
            {"alpha_x", c.alpha_x}, {"alpha_y", c.alpha_y}};
}

struct SweepSpec {
    std::string parameter;
    double start = 0.0;
    double stop = 0.0;
    long count = 1;

    double value(long i) const {
        if (count == 1) return start;
        return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

SweepSpec parse_sweep(const ConfigView& v, int depth = 0) {
    SweepSpec s;
    s.parameter = v.str("parameter");
    s.start = v.number("start");
    s.stop = v.number("stop");
    s.count = v.integer("count");
    if (s.count < 1) throw SchemaError("sweep.count must be >= 1");
    if (s.start > s.stop) throw SchemaError("sweep.start must be <= sweep.stop");
    if (v.has("inner")) {
        if (depth >= 1) throw SchemaError("sweeps nest at most to depth 2");
        parse_sweep(v.child("inner"), depth + 1);  // validated, unused by portrait
    }
    v.done();
    return s;
}

spin::QuadraticSpinHamiltonian parse_spin_hamiltonian(const ConfigView& root) {
    return {root.number("alpha"), root.number("beta"), root.number("gamma")};
}

std::string bounds_message(const spin::EnergyBounds& b) {
    return "energy bounds are [" + format_double(b.h_min) + ", " + format_double(b.h_max) + "]";
}

void append_state_row(Table& t, double time, const spin::SpinVector& s,
                      const spin::QuadraticSpinHamiltonian& h) {
    t.rows.push_back({Cell::of(time), Cell::of(s.sx), Cell::of(s.sy), Cell::of(s.sz),
                      Cell::of(spin::hamiltonian_eval(h, s)), Cell::of(s.norm2() - 1.0)});
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

json parse_config(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw SchemaError("config is not valid JSON");
    check_finite_recursive(j, "");
    return j;
}

CommandResult cmd_classify(const json& config, Format format) {
    const ConfigView root(config, "");
    const std::string family_name = root.str("family");
    const auto family = symmetry::family_from_string(family_name);
    if (!family) throw SchemaError("unknown family '" + family_name + "'");
    const auto coeffs = parse_coefficients(root);
    root.done();

    json report;
    report["family"] = family_name;
    report["coefficients"] = coefficients_to_json(coeffs);

    const auto table = symmetry::constraint_table(*family);
    json constraints = json::array();
    const auto violations = table.violations(coeffs);
    for (const auto& k : table.constraints) {
        const bool violated =
            std::find(violations.begin(), violations.end(), k.relation) != violations.end();
        constraints.push_back(
            {{"relation", k.relation}, {"residual", k.residual(coeffs)}, {"satisfied", !violated}});
    }
    report["constraints"] = std::move(constraints);
    report["family_match"] = violations.empty();

    const auto verdict = symmetry::hamiltonian_form_check(coeffs);
    report["hamiltonian_form"] = {{"passed", verdict.passed}, {"violated", verdict.violated}};
    if (verdict.passed) {
        try {
            const auto sh = symmetry::build_spin_hamiltonian(coeffs);
            report["spin_hamiltonian"] = {{"c0", sh.c0},
                                          {"cz", sh.cz},
                                          {"cx", sh.cx},
                                          {"c_cross", sh.c_cross},
                                          {"delta_beta", sh.delta_beta}};
        } catch (const std::domain_error& e) {
            report["spin_hamiltonian"] = nullptr;
            report["note"] = e.what();
        }
    } else {
        report["spin_hamiltonian"] = nullptr;
    }
    return {emit_report(report, format), {}};
}

CommandResult cmd_reduce(const json& config, Format format) {
    const ConfigView root(config, "");
    const auto h = parse_spin_hamiltonian(root);
    root.done();

    const auto p = spin::reduce_to_principal_axes(h);
    json report;
    report["alpha"] = h.alpha;
    report["beta"] = h.beta;
    report["gamma"] = h.gamma;
    report["theta"] = p.theta;
    report["regime"] = spin::to_string(p.regime);
    report["inv_Ix"] = p.inv_ix;
    report["inv_Iy"] = p.inv_iy;
    if (p.regime == spin::Regime::Degenerate) {
        report["note"] = "alpha*gamma == beta^2: one principal moment is infinite";
        return {emit_report(report, format), {}};
    }
    report["Ix"] = p.Ix();
    report["Iy"] = p.Iy();
    if (p.regime == spin::Regime::Hyperbolic) {
        report["Jx"] = p.Jx();
        report["Jy"] = p.Jy();
    }
    const auto b = spin::energy_bounds(p);
    report["energy_bounds"] = {{"h_min", b.h_min}, {"h_sep", b.h_sep}, {"h_max", b.h_max}};
    report["intersection_exists_iff"] = {{"min", b.h_min}, {"max", b.h_max}};
    json fps = json::array();
    for (const auto& fp : spin::fixed_points(p)) {
        fps.push_back({{"axis", spin::to_string(fp.axis)},
                       {"location", {fp.location.sx, fp.location.sy, fp.location.sz}},
                       {"energy", fp.energy},
                       {"stability", spin::to_string(fp.stability)}});
    }
    report["fixed_points"] = std::move(fps);
    return {emit_report(report, format), {}};
}

CommandResult cmd_simulate(const json& config, Format format) {
    const ConfigView root(config, "");
    const auto h = parse_spin_hamiltonian(root);
    const std::string mode = root.str_or("mode", "both");
    if (mode != "analytic" && mode != "numeric" && mode != "both")
        throw SchemaError("mode must be one of analytic|numeric|both");
    const double t_end = root.number("t_end");
    const double dt = root.number("dt");
    if (!(t_end > 0.0) || !(dt > 0.0)) throw SchemaError("t_end and dt must be positive");
    const long stride = root.integer_or("store_stride", 1);
    if (stride < 1) throw SchemaError("store_stride must be >= 1");
    const bool has_energy = root.has("energy");
    const bool has_initial = root.has("initial");
    if (has_energy == has_initial)
        throw SchemaError("give exactly one of 'energy' or 'initial'");
    double energy = has_energy ? root.number("energy") : 0.0;
    std::vector<double> initial;
    if (has_initial) initial = root.number_array("initial", 3);
    root.done();

    const auto p = spin::reduce_to_principal_axes(h);
    if (p.regime == spin::Regime::Degenerate)
        throw std::domain_error("degenerate regime (alpha*gamma == beta^2): no trajectory form");
    const auto b = spin::energy_bounds(p);

    spin::SpinVector s0;
    if (has_initial) {
        s0 = {initial[0], initial[1], initial[2]};
        if (std::abs(s0.norm2() - 1.0) > 1e-9)
            throw std::domain_error("initial state must lie on the unit sphere");
        const double inv = 1.0 / std::sqrt(s0.norm2());
        s0 = {s0.sx * inv, s0.sy * inv, s0.sz * inv};
        energy = spin::hamiltonian_eval(h, s0);
    }
    if (energy < b.h_min || energy > b.h_max)
        throw std::domain_error("energy " + format_double(energy) + " out of range; " +
                                bounds_message(b));

    CommandResult result;
    const auto tp = spin::trajectory_params(p, energy);
    const bool on_separatrix = tp.branch == spin::TrajectoryBranch::Separatrix ||
                               tp.branch == spin::TrajectoryBranch::Heteroclinic;
    if (on_separatrix && mode != "numeric")
        throw std::domain_error(
            "separatrix energy: the period is infinite, analytic sampling refused; use numeric "
            "mode (" + bounds_message(b) + ")");
    if (on_separatrix)
        result.warnings.push_back("separatrix energy: numeric integration only, expect critical "
                                  "slowing near the saddle points");

    double t_offset = 0.0;
    if (has_initial) {
        if (mode == "numeric") {
            // arbitrary start handled directly by the integrator
        } else {
            // phase alignment: search the mirror copies for the matching orbit
            bool found = false;
            for (auto mirror : {spin::OrbitMirror::None, spin::OrbitMirror::AboutMx,
                                spin::OrbitMirror::AboutMy, spin::OrbitMirror::AboutMz}) {
                try {
                    const auto tpm = spin::trajectory_params(p, energy, mirror);
                    t_offset = spin::time_offset_on_orbit(tpm, s0);
                    found = true;
                    break;
                } catch (const std::domain_error&) {
                }
            }
            if (!found)
                throw std::domain_error("initial state is not on an analytic orbit at its energy");
        }
    } else {
        s0 = spin::analytic_trajectory(tp, 0.0);
    }

    const auto n_samples = static_cast<std::size_t>(t_end / (dt * static_cast<double>(stride))) + 1;

    Table t;
    if (mode == "both") {
        t.columns = {"t", "mode", "Sx", "Sy", "Sz", "H", "norm_error", "deviation"};
    } else {
        t.columns = {"t", "Sx", "Sy", "Sz", "H", "norm_error"};
    }

    std::vector<spin::SpinVector> analytic;
    if (mode != "numeric") {
        analytic.resize(n_samples);
        kernels::sample_trajectory(tp, t_offset, dt * static_cast<double>(stride), analytic);
    }
    spin::NumericTrajectory numeric;
    if (mode != "analytic") {
        spin::NumericTrajectoryOptions opts;
        opts.store_stride = static_cast<int>(stride);
        numeric = spin::numeric_trajectory(h, s0, t_end, dt, opts);
    }

    for (std::size_t i = 0; i < n_samples; ++i) {
        const double time = static_cast<double>(i) * dt * static_cast<double>(stride);
        if (mode == "analytic") {
            append_state_row(t, time, analytic[i], h);
        } else if (mode == "numeric") {
            append_state_row(t, time, numeric.s[i], h);
        } else {
            const auto& a = analytic[i];
            const auto& nu = numeric.s[i];
            const double dev = std::sqrt((a.sx - nu.sx) * (a.sx - nu.sx) +
                                         (a.sy - nu.sy) * (a.sy - nu.sy) +
                                         (a.sz - nu.sz) * (a.sz - nu.sz));
            t.rows.push_back({Cell::of(time), Cell::of(std::string("analytic")), Cell::of(a.sx),
                              Cell::of(a.sy), Cell::of(a.sz),
                              Cell::of(spin::hamiltonian_eval(h, a)),
                              Cell::of(a.norm2() - 1.0), Cell::of(std::string())});
            t.rows.push_back({Cell::of(time), Cell::of(std::string("numeric")), Cell::of(nu.sx),
                              Cell::of(nu.sy), Cell::of(nu.sz),
                              Cell::of(spin::hamiltonian_eval(h, nu)),
                              Cell::of(nu.norm2() - 1.0), Cell::of(dev)});
        }
    }
    result.body = emit(t, format);
    return result;
}

CommandResult cmd_portrait(const json& config, Format format) {
    const ConfigView root(config, "");
    const auto h = parse_spin_hamiltonian(root);
    const auto sweep = parse_sweep(root.child("sweep"));
    if (sweep.parameter != "energy")
        throw SchemaError("portrait sweeps run over parameter 'energy'");
    const long samples = root.integer_or("orbit_samples", 256);
    if (samples < 2) throw SchemaError("orbit_samples must be >= 2");
    root.done();

    const auto p = spin::reduce_to_principal_axes(h);
    if (p.regime == spin::Regime::Degenerate)
        throw std::domain_error("degenerate regime (alpha*gamma == beta^2): no orbit portrait");
    const auto b = spin::energy_bounds(p);

    struct Strand {
        spin::EllipticTrajectoryParams tp;
        double t_begin, t_step;
    };
    auto strands_for = [&](double H) {
        std::vector<Strand> out;
        const auto tp = spin::trajectory_params(p, H);
        const bool open_orbit = tp.branch == spin::TrajectoryBranch::Separatrix ||
                                tp.branch == spin::TrajectoryBranch::Heteroclinic;
        std::vector<spin::OrbitMirror> mirrors;
        if (open_orbit) {
            mirrors = {spin::OrbitMirror::None, spin::OrbitMirror::AboutMx,
                       spin::OrbitMirror::AboutMy, spin::OrbitMirror::AboutMz};
        } else if (tp.branch == spin::TrajectoryBranch::HyperbolicNeg) {
            mirrors = {spin::OrbitMirror::None, spin::OrbitMirror::AboutMx};
        } else {
            mirrors = {spin::OrbitMirror::None, spin::OrbitMirror::AboutMy};
        }
        for (auto m : mirrors) {
            const auto tpm = spin::trajectory_params(p, H, m);
            if (open_orbit) {
                const double t_max = 12.0 / tpm.rate;
                out.push_back({tpm, -t_max, 2.0 * t_max / static_cast<double>(samples - 1)});
            } else {
                const double period = 4.0 * tpm.quarter_period / tpm.rate;
                out.push_back({tpm, 0.0, period / static_cast<double>(samples)});
            }
        }
        return out;
    };

    const long count = sweep.count;
    std::vector<std::vector<std::vector<Cell>>> blocks(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
        const double H = sweep.value(i);
        auto& block = blocks[static_cast<std::size_t>(i)];
        const bool exists = H > b.h_min && H < b.h_max;
        if (!exists) {
            block.push_back({Cell::of(H), Cell::of(std::string("none")), Cell::of(0.0),
                             Cell::of(-1.0), Cell::of(std::string()), Cell::of(std::string()),
                             Cell::of(std::string())});
            continue;
        }
        int strand_id = 0;
        for (const auto& strand : strands_for(H)) {
            std::vector<spin::SpinVector> pts(static_cast<std::size_t>(samples));
            kernels::sample_trajectory(strand.tp, strand.t_begin, strand.t_step, pts);
            for (long j = 0; j < samples; ++j) {
                const auto& s = pts[static_cast<std::size_t>(j)];
                block.push_back({Cell::of(H),
                                 Cell::of(std::string(spin::to_string(strand.tp.branch)) + "/" +
                                          std::to_string(strand_id)),
                                 Cell::of(1.0), Cell::of(static_cast<double>(j)), Cell::of(s.sx),
                                 Cell::of(s.sy), Cell::of(s.sz)});
            }
            ++strand_id;
        }
    }

    Table t;
    t.columns = {"H", "branch", "exists", "idx", "Sx", "Sy", "Sz"};
    for (auto& block : blocks)
        for (auto& row : block) t.rows.push_back(std::move(row));
    return {emit(t, format), {}};
}

CommandResult cmd_propagate(const json& config, Format format) {
    const ConfigView root(config, "");
    const auto coeffs = parse_coefficients(root);

    const ConfigView gridcfg = root.child("grid");
    const long n = gridcfg.integer("n");
    const double dtau = gridcfg.number("dtau");
    const bool has_tau0 = gridcfg.has("tau0");
    const double tau0 = gridcfg.number_or("tau0", 0.0);
    gridcfg.done();
    if (n < 2) throw SchemaError("grid.n must be a power of two >= 2");

    const ConfigView propcfg = root.child("propagation");
    prop::PropagationParams params;
    params.coeffs = coeffs;
    params.beta2 = propcfg.number_or("beta2", 0.0);
    if (propcfg.has("beta2_x")) params.beta2_x = propcfg.number("beta2_x");
    if (propcfg.has("beta2_y")) params.beta2_y = propcfg.number("beta2_y");
    params.dz = propcfg.number("dz");
    params.z_end = propcfg.number("z_end");
    params.include_fwm = propcfg.flag_or("include_fwm", true);
    const long checkpoint_every = propcfg.integer_or("checkpoint_every", 0);
    propcfg.done();
    if (!(params.dz > 0.0) || params.z_end < 0.0)
        throw SchemaError("propagation.dz must be positive and z_end non-negative");

    const ConfigView field = root.child("input_field");
    const std::string shape_name = field.str("shape");
    prop::PulseShape shape;
    if (shape_name == "cw")
        shape = prop::PulseShape::Cw;
    else if (shape_name == "gaussian")
        shape = prop::PulseShape::Gaussian;
    else if (shape_name == "sech")
        shape = prop::PulseShape::Sech;
    else
        throw SchemaError("input_field.shape must be cw|gaussian|sech");
    const double power_x = field.number("power_x");
    const double power_y = field.number_or("power_y", 0.0);
    const double phase_y = field.number_or("phase_y", 0.0);
    const double t0 = field.number_or("t0", 1.0);
    if (shape != prop::PulseShape::Cw && !(t0 > 0.0))
        throw SchemaError("input_field.t0 must be positive for pulsed shapes");
    if (power_x < 0.0 || power_y < 0.0) throw SchemaError("powers must be non-negative");
    field.done();

    const bool dump = root.has("dump_fields");
    const std::string dump_path = root.str_or("dump_fields", "");
    root.done();

    prop::FieldGrid grid;
    try {
        grid = prop::make_grid(static_cast<std::size_t>(n), dtau);
    } catch (const std::domain_error& e) {
        throw SchemaError(e.what());
    }
    if (has_tau0) grid.tau0 = tau0;
    prop::fill_input_field(grid, shape, power_x, power_y, phase_y, t0);

    const auto total_steps = static_cast<long>(std::ceil(params.z_end / params.dz));
    const long stride = checkpoint_every > 0
                            ? checkpoint_every
                            : std::max<long>(1, total_steps / 10);

    Table t;
    t.columns = {"z", "S0", "Sx", "Sy", "Sz", "dphi"};
    auto emit_row = [&](double z, const prop::FieldGrid& g) {
        const auto st = g.integrated_stokes();
        const std::size_t mid = g.n / 2;
        const double dphi = std::arg(g.ux[mid] * std::conj(g.uy[mid]));
        t.rows.push_back({Cell::of(z), Cell::of(st.s0), Cell::of(st.sx), Cell::of(st.sy),
                          Cell::of(st.sz), Cell::of(dphi)});
    };
    emit_row(0.0, grid);
    const double s0_initial = grid.integrated_stokes().s0;
    long step_counter = 0;
    const auto result = prop::split_step_propagate(
        grid, params, [&](double z, const prop::FieldGrid& g) {
            ++step_counter;
            if (step_counter % stride == 0 || step_counter == total_steps) emit_row(z, g);
        });

    CommandResult out;
    out.warnings = result.warnings;
    if (coeffs.lossless() && s0_initial > 0.0) {
        const double drift =
            std::abs(result.grid.integrated_stokes().s0 - s0_initial) / s0_initial;
        if (drift > 1e-8)
            out.warnings.push_back("total power drifted by " + format_double(drift) +
                                   " on a lossless run; reduce dz");
    }
    out.body = emit(t, format);

    if (dump) {
        std::ofstream os(dump_path, std::ios::binary);
        if (!os) throw std::domain_error("cannot open dump file: " + dump_path);
        const char magic[4] = {'C', 'M', 'E', 'F'};
        const std::uint32_t version = 1;
        const auto n32 = static_cast<std::uint32_t>(result.grid.n);
        os.write(magic, 4);
        os.write(reinterpret_cast<const char*>(&version), 4);
        os.write(reinterpret_cast<const char*>(&n32), 4);
        os.write(reinterpret_cast<const char*>(&result.grid.dtau), 8);
        auto write_field = [&](const std::vector<prop::Complex>& f) {
            for (const auto& v : f) {
                const double re = v.real(), im = v.imag();
                os.write(reinterpret_cast<const char*>(&re), 8);
                os.write(reinterpret_cast<const char*>(&im), 8);
            }
        };
        write_field(result.grid.ux);
        write_field(result.grid.uy);
    }
    return out;
}

CommandResult cmd_fibermode(const json& config, Format format) {
    const ConfigView root(config, "");
    const ConfigView geocfg = root.child("geometry");
    fiber::FiberGeometry geom;
    geom.core_radius = geocfg.number("core_radius");
    geom.n1 = geocfg.number("n1");
    geom.n_cladding = geocfg.number("n_cladding");
    geom.lambda0 = geocfg.number("lambda0");
    geocfg.done();
    const double chi3 = root.number_or("chi3_xxxx", 0.0);
    const double power = root.number_or("power", 0.0);
    const double t0 = root.number_or("t0", 0.0);
    const double beta2 = root.number_or("beta2", 0.0);
    const double delta_beta = root.number_or("delta_beta", 0.0);
    root.done();

    CommandResult out;
    const auto sm = fiber::single_mode_check(geom);
    if (!sm.weakly_guiding)
        out.warnings.push_back(
            "index contrast exceeds 1%: the weakly guiding LP description degrades");

    json report;
    report["V"] = sm.V;
    report["single_mode"] = sm.single_mode;
    report["weakly_guiding"] = sm.weakly_guiding;
    report["cutoff_wavelength"] = fiber::cutoff_wavelength(geom);
    const auto mode = fiber::lp01_solve(geom);
    report["n_e"] = mode.n_e;
    report["beta"] = mode.beta;
    report["u"] = mode.u;
    report["w"] = mode.w;
    const double gamma = chi3 != 0.0 ? fiber::gamma_parameter(geom, chi3, mode) : 0.0;
    report["gamma"] = gamma;
    const auto scales =
        fiber::length_scales(power, t0, beta2, delta_beta, gamma);
    report["length_scales"] = {{"dispersion", scales.dispersion},
                               {"nonlinear", scales.nonlinear},
                               {"beat", scales.beat},
                               {"dispersion_valid", scales.dispersion_valid},
                               {"nonlinear_valid", scales.nonlinear_valid},
                               {"beat_valid", scales.beat_valid},
                               {"dispersion_negligible_50km", scales.dispersion_negligible_50km},
                               {"nonlinear_negligible_50km", scales.nonlinear_negligible_50km}};
    out.body = emit_report(report, format);
    return out;
}

}  // namespace fiberspin::cli
