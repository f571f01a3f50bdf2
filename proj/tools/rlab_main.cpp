// Command-line driver: cumulant quadrature, lattice simulation, boundary
// sweeps, convergence-rate tables, and the cross-parameter covariance study.
// Every command is deterministic given its full flag set (including --seed);
// worker threads never change the output bytes.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlab/cumulants.hpp"
#include "rlab/empirics.hpp"
#include "rlab/exponents.hpp"
#include "rlab/limit_laws.hpp"
#include "rlab/paths.hpp"
#include "rlab/rng.hpp"
#include "rlab/simulate.hpp"
#include "rlab/special_functions.hpp"

using nlohmann::json;
using namespace rlab;

namespace {

struct CommonOpts {
    std::uint64_t seed = 12345;
    int jobs = 1;
    std::string out;
    std::string format = "csv";
    bool strict = false;
};

std::vector<std::string> g_warnings;

void warn(const std::string& msg) {
    g_warnings.push_back(msg);
    std::cerr << "warning: " << msg << "\n";
}

struct Table {
    json meta = json::object();
    std::vector<std::string> cols;
    std::vector<std::vector<json>> rows;

    void add_row(std::initializer_list<json> cells) { rows.emplace_back(cells); }
};

std::string cell_csv(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return fmt_g17(v.get<double>());
    return v.dump();
}

void write_table(std::ostream& os, const Table& t, const CommonOpts& c) {
    if (c.format == "json") {
        json doc;
        doc["meta"] = t.meta;
        doc["columns"] = t.cols;
        doc["rows"] = t.rows;
        os << doc.dump(2) << "\n";
        return;
    }
    os << "# " << t.meta.dump() << "\n";
    for (std::size_t i = 0; i < t.cols.size(); ++i)
        os << (i ? "," : "") << t.cols[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << cell_csv(row[i]);
        os << "\n";
    }
}

void emit(const Table& t, const CommonOpts& c) {
    if (c.out.empty()) {
        write_table(std::cout, t, c);
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + c.out);
    write_table(f, t, c);
}

json ensemble_meta(const PathEnsemble& e) {
    json m;
    m["label"] = e.meta.label;
    m["g1"] = e.meta.g1;
    m["g2"] = e.meta.g2;
    m["seed"] = e.meta.seed;
    m["a_norm"] = e.meta.a_norm;
    m["rescale"] = e.meta.rescale;
    m["raw_var1"] = e.meta.raw_var1;
    m["tail_var1"] = e.meta.tail_var1;
    m["tail_var2"] = e.meta.tail_var2;
    m["fbm_max_clip"] = e.meta.fbm_max_clip;
    m["var_warning"] = e.meta.var_warning;
    return m;
}

void emit_ensemble(const PathEnsemble& e, json meta, const CommonOpts& c) {
    meta.update(ensemble_meta(e));
    std::ostream* os = &std::cout;
    std::ofstream f;
    if (!c.out.empty()) {
        f.open(c.out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + c.out);
        os = &f;
    }
    if (c.format == "json") {
        json doc;
        doc["meta"] = meta;
        doc["grid"] = e.grid;
        doc["paths"] = e.paths;
        *os << doc.dump(2) << "\n";
        return;
    }
    *os << "# " << meta.dump() << "\n";
    write_ensemble_csv(*os, e);
}

LinearCombo parse_combo(const std::vector<double>& coeffs,
                        const std::vector<double>& times) {
    if (coeffs.size() != times.size())
        throw std::invalid_argument("--coeffs and --times must have equal length");
    LinearCombo combo;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        combo.push_back({coeffs[i], times[i]});
    return combo;
}

void check_offsets(const std::vector<double>& offs) {
    if (offs.empty()) throw std::invalid_argument("--offsets must be nonempty");
    for (std::size_t i = 0; i < offs.size(); ++i) {
        if (!(offs[i] > 0.0))
            throw std::invalid_argument("--offsets must be positive");
        if (i > 0 && !(offs[i] < offs[i - 1]))
            throw std::invalid_argument("--offsets must be strictly decreasing");
    }
}

// k-statistics of the ensemble marginal at t = 1 as long-format rows
void append_sim_rows(Table& t, const json& off, const PathEnsemble& e) {
    auto st = k_statistics(marginal_at(e, 1.0));
    const double g1 = e.meta.g1, g2 = e.meta.g2;
    t.add_row({off, g1, g2, "sim_k2", st.k2, st.se2});
    t.add_row({off, g1, g2, "sim_k3", st.k3, st.se3});
    t.add_row({off, g1, g2, "sim_k4", st.k4, st.se4});
}

// slope of log|y| vs log(offset); skipped (with a warning) if not estimable
void append_slope(Table& t, const std::vector<double>& offs,
                  const std::vector<double>& ys, const std::string& name) {
    if (offs.size() < 3) {
        warn("slope " + name + " skipped: need at least 3 offsets");
        return;
    }
    std::vector<double> ay;
    for (double v : ys) ay.push_back(std::abs(v));
    for (double v : ay)
        if (!(v > 0.0)) {
            warn("slope " + name + " skipped: nonpositive magnitude");
            return;
        }
    auto fit = loglog_slope(offs, ay);
    t.add_row({nullptr, nullptr, nullptr, name, fit.slope, fit.stderr_});
}

QuadratureResult engine_kappa(const ExponentPair& p, const LinearCombo& combo,
                              int m, long long budget, const CommonOpts& c,
                              std::uint64_t salt) {
    auto r = kappa_m(p, combo, m, budget, mix_seed(c.seed, salt, m), c.jobs);
    if (!r.converged) {
        std::ostringstream ss;
        ss << "kappa_" << m << " at (" << p.g1 << "," << p.g2
           << ") did not reach its convergence target (se " << r.std_error << ")";
        warn(ss.str());
    }
    return r;
}

// ---- subcommand bodies ----------------------------------------------------

void run_cumulants(double g1, double g2, const std::vector<int>& ms,
                   const std::vector<double>& coeffs,
                   const std::vector<double>& times, long long budget,
                   const CommonOpts& c) {
    const ExponentPair p{g1, g2};
    const LinearCombo combo = parse_combo(coeffs, times);
    Table t;
    t.meta = {{"cmd", "cumulants"}, {"g1", g1},        {"g2", g2},
              {"budget", budget},   {"seed", c.seed},  {"coeffs", coeffs},
              {"times", times}};
    t.cols = {"m", "value", "std_error", "converged"};
    for (int m : ms) {
        auto r = engine_kappa(p, combo, m, budget, c, 1);
        t.add_row({m, r.value, r.std_error, static_cast<int>(r.converged)});
    }
    emit(t, c);
}

void run_moments(double g1, double g2, const std::vector<int>& ms,
                 const std::vector<double>& coeffs,
                 const std::vector<double>& times, long long budget,
                 const CommonOpts& c) {
    const ExponentPair p{g1, g2};
    const LinearCombo combo = parse_combo(coeffs, times);
    int mmax = 2;
    for (int m : ms) {
        if (m < 2 || m > 6)
            throw std::invalid_argument("moments: orders must lie in 2..6");
        mmax = std::max(mmax, m);
    }
    // moments of the centered variable from its cumulants
    double k[7] = {0, 0, 0, 0, 0, 0, 0};
    double se[7] = {0, 0, 0, 0, 0, 0, 0};
    for (int j = 2; j <= mmax; ++j) {
        auto r = engine_kappa(p, combo, j, budget, c, 2);
        k[j] = r.value;
        se[j] = r.std_error;
    }
    Table t;
    t.meta = {{"cmd", "moments"}, {"g1", g1},       {"g2", g2},
              {"budget", budget}, {"seed", c.seed}, {"coeffs", coeffs},
              {"times", times}};
    t.cols = {"m", "value", "std_error"};
    auto h = [](double a, double b) { return std::sqrt(a * a + b * b); };
    for (int m : ms) {
        double v = 0.0, s = 0.0;
        switch (m) {
            case 2: v = k[2]; s = se[2]; break;
            case 3: v = k[3]; s = se[3]; break;
            case 4:
                v = k[4] + 3 * k[2] * k[2];
                s = h(se[4], 6 * k[2] * se[2]);
                break;
            case 5:
                v = k[5] + 10 * k[3] * k[2];
                s = h(se[5], h(10 * k[2] * se[3], 10 * k[3] * se[2]));
                break;
            case 6:
                v = k[6] + 15 * k[4] * k[2] + 10 * k[3] * k[3] +
                    15 * k[2] * k[2] * k[2];
                s = h(h(se[6], 15 * k[2] * se[4]),
                      h(20 * k[3] * se[3],
                        (15 * k[4] + 45 * k[2] * k[2]) * se[2]));
                break;
        }
        t.add_row({m, v, s});
    }
    emit(t, c);
}

void run_cross_cov(double g1, double g2, double g1b, double g2b,
                   const CommonOpts& c) {
    const double v = cross_covariance({g1, g2}, {g1b, g2b});
    Table t;
    t.meta = {{"cmd", "cross-cov"}, {"seed", c.seed}};
    t.cols = {"g1a", "g2a", "g1b", "g2b", "value"};
    t.add_row({g1, g2, g1b, g2b, v});
    emit(t, c);
}

void run_rates(double g1, double g2, const CommonOpts& c) {
    const ExponentPair p{g1, g2};
    validate_interior(p);
    auto cls = classify_boundary(p);
    const char* kind = "";
    switch (cls.target.kind) {
        case BoundaryKind::DiagonalD: kind = "diagonal"; break;
        case BoundaryKind::EdgeE1: kind = "edge-g1"; break;
        case BoundaryKind::EdgeE2: kind = "edge-g2"; break;
        case BoundaryKind::CornerHalfOne: kind = "corner-half-one"; break;
        case BoundaryKind::CornerHalfHalf: kind = "corner-half-half"; break;
    }
    json rd, rc;
    try {
        rd = rate_diag(p);
    } catch (const std::exception&) { rd = nullptr; }
    try {
        rc = rate_corner(p);
    } catch (const std::exception&) { rc = nullptr; }
    Table t;
    t.meta = {{"cmd", "rates"}, {"seed", c.seed}};
    t.cols = {"g1", "g2", "nearest", "distance", "rho_corner1", "rho_corner2",
              "rate_diag", "rate_corner"};
    t.add_row({g1, g2, kind, cls.distance, cls.rho_corner1, cls.rho_corner2,
               rd, rc});
    emit(t, c);
}

LatticeConfig make_cfg(int n_grid, int trunc, int paths,
                       const CommonOpts& c) {
    LatticeConfig cfg;
    cfg.n_grid = n_grid;
    cfg.trunc = trunc > 0 ? trunc : 16 * n_grid;
    cfg.n_paths = paths;
    cfg.seed = c.seed;
    return cfg;
}

void run_simulate(double g1, double g2, double horizon, int n_grid, int trunc,
                  int paths, const CommonOpts& c) {
    const LatticeConfig cfg = make_cfg(n_grid, trunc, paths, c);
    auto e = simulate_paths({g1, g2}, horizon, cfg, c.jobs);
    if (e.meta.var_warning) {
        std::ostringstream ss;
        ss << "ensemble variance at t=1 before rescale was " << e.meta.raw_var1
           << " (off the unit target by more than 5%)";
        warn(ss.str());
    }
    json meta = {{"cmd", "simulate"},     {"horizon", horizon},
                 {"n_grid", cfg.n_grid},  {"trunc", cfg.trunc},
                 {"n_paths", cfg.n_paths}};
    emit_ensemble(e, meta, c);
}

void run_sample_limit(const std::string& law_name, double gamma, double rho,
                      double horizon, int steps, int paths,
                      const CommonOpts& c) {
    LimitLaw law;
    if (law_name == "bm") law = LimitLaw::brownian();
    else if (law_name == "edge") law = LimitLaw::product_fbm(gamma);
    else if (law_name == "corner1") law = LimitLaw::corner_x(rho);
    else if (law_name == "corner2") law = LimitLaw::corner_y(rho);
    else throw std::invalid_argument("unknown law: " + law_name);
    if (steps < 1) throw std::invalid_argument("--steps must be >= 1");
    if (!(horizon > 0.0)) throw std::invalid_argument("--horizon must be > 0");
    std::vector<double> grid(steps + 1);
    for (int k = 0; k <= steps; ++k) grid[k] = horizon * k / steps;
    auto e = sample_limit(law, grid, paths, c.seed);
    json meta = {{"cmd", "sample-limit"}, {"law", law_name},
                 {"gamma", gamma},        {"rho", rho},
                 {"horizon", horizon},    {"steps", steps},
                 {"n_paths", paths},      {"seed", c.seed}};
    emit_ensemble(e, meta, c);
}

void run_sweep_diag(const std::vector<double>& offs, long long budget,
                    int n_grid, int trunc, int paths, const CommonOpts& c) {
    check_offsets(offs);
    LinearCombo combo{{1.0, 1.0}};
    Table t;
    t.meta = {{"cmd", "sweep-diag"}, {"offsets", offs}, {"budget", budget},
              {"seed", c.seed},      {"paths", paths}};
    t.cols = {"offset", "g1", "g2", "name", "value", "std_error"};
    std::vector<double> k3s, k4s;
    for (double off : offs) {
        const double g = -0.75 + off / 2.0;  // midline point at diagonal gap off
        const ExponentPair p{g, g};
        auto k3 = engine_kappa(p, combo, 3, budget, c, 3);
        auto k4 = engine_kappa(p, combo, 4, budget, c, 3);
        k3s.push_back(k3.value);
        k4s.push_back(k4.value);
        t.add_row({off, g, g, "k3", k3.value, k3.std_error});
        t.add_row({off, g, g, "k4", k4.value, k4.std_error});
        t.add_row({off, g, g, "rate_diag", rate_diag(p), 0.0});
        if (paths > 0) {
            auto e = simulate_paths(p, 1.0, make_cfg(n_grid, trunc, paths, c),
                                    c.jobs);
            append_sim_rows(t, off, e);
        }
    }
    append_slope(t, offs, k3s, "slope_abs_k3");
    append_slope(t, offs, k4s, "slope_abs_k4");
    emit(t, c);
}

void run_sweep_edge(double g2, const std::vector<double>& offs,
                    long long budget, int n_grid, int trunc, int paths,
                    const CommonOpts& c) {
    check_offsets(offs);
    LinearCombo combo{{1.0, 1.0}};
    Table t;
    t.meta = {{"cmd", "sweep-edge"}, {"gamma2", g2},   {"offsets", offs},
              {"budget", budget},    {"seed", c.seed}, {"paths", paths}};
    t.cols = {"offset", "g1", "g2", "name", "value", "std_error"};
    std::vector<double> k3s, k4gaps, dws;
    for (double off : offs) {
        const ExponentPair p{-0.5 - off, g2};
        auto k3 = engine_kappa(p, combo, 3, budget, c, 4);
        auto k4 = engine_kappa(p, combo, 4, budget, c, 4);
        auto k6 = engine_kappa(p, combo, 6, budget, c, 4);
        const double dw = dw_bound_edge(k3.value, k4.value, k6.value);
        k3s.push_back(k3.value);
        k4gaps.push_back(k4.value - 6.0);
        dws.push_back(dw);
        t.add_row({off, p.g1, p.g2, "k3", k3.value, k3.std_error});
        t.add_row({off, p.g1, p.g2, "k4", k4.value, k4.std_error});
        t.add_row({off, p.g1, p.g2, "k6", k6.value, k6.std_error});
        t.add_row({off, p.g1, p.g2, "limit_k4",
                   kappa_limit_edge(4, combo, g2), 0.0});
        t.add_row({off, p.g1, p.g2, "limit_k6",
                   kappa_limit_edge(6, combo, g2), 0.0});
        t.add_row({off, p.g1, p.g2, "dw_bound", dw, 0.0});
        t.add_row({off, p.g1, p.g2, "m_statistic",
                   m_statistic(k3.value, k4.value - 6.0), 0.0});
        if (paths > 0) {
            auto e = simulate_paths(p, 1.0, make_cfg(n_grid, trunc, paths, c),
                                    c.jobs);
            append_sim_rows(t, off, e);
        }
    }
    append_slope(t, offs, k3s, "slope_abs_k3");
    append_slope(t, offs, k4gaps, "slope_k4_gap");
    append_slope(t, offs, dws, "slope_dw_bound");
    emit(t, c);
}

// interior proxy pairs approaching corner (-1/2,-1) along direction rho
ExponentPair corner1_point(double rho, double h) {
    const double g2 = -1.0 + h;
    double g1;
    if (rho <= 0.0)
        g1 = -0.5 - h + std::pow(h, 1.5);  // effective rho -> 0 like sqrt(h)
    else if (rho >= 1.0)
        g1 = -0.5 - std::pow(h, 1.5);      // effective rho -> 1 like 1-sqrt(h)
    else
        g1 = -0.5 - (1.0 - rho) * h;
    return {g1, g2};
}

void run_sweep_corner1(double rho, const std::vector<double>& offs,
                       long long budget, const CommonOpts& c) {
    check_offsets(offs);
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::domain_error("--rho must lie in [0, 1]");
    LinearCombo combo{{1.0, 1.0}};
    Table t;
    t.meta = {{"cmd", "sweep-corner1"}, {"rho", rho}, {"offsets", offs},
              {"budget", budget},       {"seed", c.seed}};
    t.cols = {"offset", "g1", "g2", "name", "value", "std_error"};
    std::vector<double> rates;
    for (double off : offs) {
        const ExponentPair p = corner1_point(rho, off);
        const double rho_eff = (p.g1 + p.g2 + 1.5) / (p.g2 + 1.0);
        auto k4 = engine_kappa(p, combo, 4, budget, c, 5);
        const double denom = 6.0 * rho_eff * rho_eff;
        const double rc = rate_corner(p);
        rates.push_back(rc);
        t.add_row({off, p.g1, p.g2, "k4", k4.value, k4.std_error});
        t.add_row({off, p.g1, p.g2, "rho_eff", rho_eff, 0.0});
        t.add_row({off, p.g1, p.g2, "k4_ratio", k4.value / denom,
                   k4.std_error / denom});
        t.add_row({off, p.g1, p.g2, "limit_k4",
                   kappa_limit_cornerX(4, combo, rho_eff), 0.0});
        t.add_row({off, p.g1, p.g2, "rate_corner", rc, 0.0});
    }
    append_slope(t, offs, rates, "slope_rate_corner");
    emit(t, c);
}

void run_sweep_corner2(double rho, const std::vector<double>& offs,
                       long long budget, int n_grid, int trunc, int paths,
                       const CommonOpts& c) {
    check_offsets(offs);
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::domain_error("--rho must lie in [0, 1]");
    LinearCombo combo{{1.0, 1.0}};
    Table t;
    t.meta = {{"cmd", "sweep-corner2"}, {"rho", rho},     {"offsets", offs},
              {"budget", budget},       {"seed", c.seed}, {"paths", paths}};
    t.cols = {"offset", "g1", "g2", "name", "value", "std_error"};
    for (double off : offs) {
        const double g1 =
            rho > 0.0 ? -0.5 - rho * off : -0.5 - std::pow(off, 1.5);
        const ExponentPair p{g1, -0.5 - off};
        const double rho_eff = (p.g1 + 0.5) / (p.g2 + 0.5);
        auto k3 = engine_kappa(p, combo, 3, budget, c, 6);
        auto k4 = engine_kappa(p, combo, 4, budget, c, 6);
        t.add_row({off, p.g1, p.g2, "k3", k3.value, k3.std_error});
        t.add_row({off, p.g1, p.g2, "k4", k4.value, k4.std_error});
        t.add_row({off, p.g1, p.g2, "limit_k3",
                   kappa_limit_cornerY(3, combo, rho_eff), 0.0});
        t.add_row({off, p.g1, p.g2, "limit_k4",
                   kappa_limit_cornerY(4, combo, rho_eff), 0.0});
        if (paths > 0) {
            auto e = simulate_paths(p, 1.0, make_cfg(n_grid, trunc, paths, c),
                                    c.jobs);
            append_sim_rows(t, off, e);
        }
    }
    emit(t, c);
}

double no_l2_corner2_limit(double r, double rho) {
    return (4 * r / ((r + 1) * (r + 1))) *
           ((r + rho) * (1 + r * rho) + (r + 1) * (r + 1) * rho) /
           ((1 + rho) * (1 + rho) + 4 * rho) * (1 + rho) * (1 + rho) /
           ((r + rho) * (1 + r * rho));
}

void run_no_l2(const std::string& which, std::vector<double> rs, double h,
               double gamma, double rho, const CommonOpts& c) {
    if (rs.empty()) throw std::invalid_argument("--r must be nonempty");
    for (double r : rs)
        if (!(r > 0.0 && r <= 1.0))
            throw std::invalid_argument("--r values must lie in (0, 1]");
    if (!(h > 0.0 && h < 0.1))
        throw std::invalid_argument("--offset must be a small positive value");
    Table t;
    t.meta = {{"cmd", "no-l2"}, {"case", which}, {"offset", h},
              {"gamma", gamma}, {"rho", rho},    {"seed", c.seed}};
    t.cols = {"r", "value", "limit", "gap"};
    for (double r : rs) {
        double v = 0.0, lim = 0.0;
        if (which == "edge") {
            v = cross_covariance({-0.5 - r * h, gamma}, {-0.5 - h, gamma});
            lim = 2.0 * std::sqrt(r) / (1.0 + r);
        } else if (which == "corner1") {
            const double h15 = std::pow(h, 1.5);
            v = cross_covariance({-0.5 - r * h15, -1.0 + r * h},
                                 {-0.5 - h15, -1.0 + h});
            lim = 2.0 * std::sqrt(r) / (1.0 + r);
        } else if (which == "corner2") {
            v = cross_covariance({-0.5 - r * rho * h, -0.5 - r * h},
                                 {-0.5 - rho * h, -0.5 - h});
            lim = no_l2_corner2_limit(r, rho);
        } else {
            throw std::invalid_argument("unknown case: " + which);
        }
        if (r < 1.0 && !(lim < 1.0)) warn("limit not below 1 at r < 1");
        t.add_row({r, v, lim, std::abs(v - lim)});
    }
    emit(t, c);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "rosenblatt lab: exact and simulated statistics of the generalized "
        "Rosenblatt process and its boundary limit laws"};
    app.require_subcommand(1);
    app.set_config("--config", "", "plain key=value config file");

    CommonOpts c;
    if (const char* env = std::getenv("ROSENBLATT_LAB_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') c.seed = v;
    }

    double g1 = -0.7, g2 = -0.7, g1b = -0.7, g2b = -0.7;
    double horizon = 1.0, gamma = -0.75, rho = 0.5, h = 1e-3;
    int n_grid = 256, trunc = 0, paths = 100, steps = 16;
    long long budget = 400000;
    std::vector<int> ms{2, 3, 4};
    std::vector<double> offsets;
    std::vector<double> coeffs{1.0}, times{1.0};
    std::vector<double> rs{1.0 / 9, 0.25, 0.5, 1.0};
    std::string law = "bm", which = "edge";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", c.seed, "RNG seed (env ROSENBLATT_LAB_SEED)")
            ->capture_default_str();
        sub->add_option("--jobs", c.jobs, "worker threads (never changes output)")
            ->capture_default_str();
        sub->add_option("--out", c.out, "output file (default stdout)");
        sub->add_option("--format", c.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        sub->add_flag("--strict", c.strict, "promote warnings to failures");
    };

    auto* cum = app.add_subcommand(
        "cumulants", "quadrature cumulants of a linear combination");
    cum->add_option("--gamma1", g1)->required();
    cum->add_option("--gamma2", g2)->required();
    cum->add_option("--m", ms, "orders (2..8)")->delimiter(',');
    cum->add_option("--coeffs", coeffs)->delimiter(',');
    cum->add_option("--times", times)->delimiter(',');
    cum->add_option("--budget", budget, "samples per quadrature cell");
    add_common(cum);
    cum->callback([&] { run_cumulants(g1, g2, ms, coeffs, times, budget, c); });

    auto* mom = app.add_subcommand(
        "moments", "centered moments derived from the cumulants");
    mom->add_option("--gamma1", g1)->required();
    mom->add_option("--gamma2", g2)->required();
    mom->add_option("--m", ms, "orders (2..6)")->delimiter(',');
    mom->add_option("--coeffs", coeffs)->delimiter(',');
    mom->add_option("--times", times)->delimiter(',');
    mom->add_option("--budget", budget);
    add_common(mom);
    mom->callback([&] { run_moments(g1, g2, ms, coeffs, times, budget, c); });

    auto* xc = app.add_subcommand(
        "cross-cov", "covariance of two standardized processes sharing noise");
    xc->add_option("--gamma1", g1)->required();
    xc->add_option("--gamma2", g2)->required();
    xc->add_option("--gamma1b", g1b)->required();
    xc->add_option("--gamma2b", g2b)->required();
    add_common(xc);
    xc->callback([&] { run_cross_cov(g1, g2, g1b, g2b, c); });

    auto* rt = app.add_subcommand("rates", "boundary classification and rates");
    rt->add_option("--gamma1", g1)->required();
    rt->add_option("--gamma2", g2)->required();
    add_common(rt);
    rt->callback([&] { run_rates(g1, g2, c); });

    auto* sim = app.add_subcommand("simulate", "lattice path ensemble");
    sim->add_option("--gamma1", g1)->required();
    sim->add_option("--gamma2", g2)->required();
    sim->add_option("--horizon", horizon)->capture_default_str();
    sim->add_option("--n-grid", n_grid)->capture_default_str();
    sim->add_option("--trunc", trunc, "0 means 16 * n_grid");
    sim->add_option("--paths", paths)->capture_default_str();
    add_common(sim);
    sim->callback(
        [&] { run_simulate(g1, g2, horizon, n_grid, trunc, paths, c); });

    auto* sl = app.add_subcommand("sample-limit", "boundary limit-law paths");
    sl->add_option("--law", law, "bm | edge | corner1 | corner2")
        ->capture_default_str();
    sl->add_option("--gamma", gamma, "edge family index")->capture_default_str();
    sl->add_option("--rho", rho, "corner mixing parameter")
        ->capture_default_str();
    sl->add_option("--horizon", horizon)->capture_default_str();
    sl->add_option("--steps", steps)->capture_default_str();
    sl->add_option("--paths", paths)->capture_default_str();
    add_common(sl);
    sl->callback(
        [&] { run_sample_limit(law, gamma, rho, horizon, steps, paths, c); });

    auto* sd = app.add_subcommand("sweep-diag",
                                  "approach the diagonal side on the midline");
    sd->add_option("--offsets", offsets)->delimiter(',');
    sd->add_option("--budget", budget);
    sd->add_option("--n-grid", n_grid);
    sd->add_option("--trunc", trunc);
    sd->add_option("--paths", paths, "0 disables simulation columns");
    add_common(sd);
    sd->callback([&] {
        if (offsets.empty()) offsets = {0.08, 0.04, 0.02, 0.01};
        paths = sd->count("--paths") ? paths : 0;
        run_sweep_diag(offsets, budget, n_grid, trunc, paths, c);
    });

    auto* se = app.add_subcommand("sweep-edge", "approach an edge");
    se->add_option("--gamma2", g2, "fixed interior exponent")
        ->capture_default_str();
    se->add_option("--offsets", offsets)->delimiter(',');
    se->add_option("--budget", budget);
    se->add_option("--n-grid", n_grid);
    se->add_option("--trunc", trunc);
    se->add_option("--paths", paths, "0 disables simulation columns");
    add_common(se);
    se->callback([&] {
        if (offsets.empty()) offsets = {0.02, 0.01, 0.005};
        paths = se->count("--paths") ? paths : 0;
        run_sweep_edge(g2, offsets, budget, n_grid, trunc, paths, c);
    });

    auto* sc1 = app.add_subcommand("sweep-corner1",
                                   "approach the corner (-1/2,-1)");
    sc1->add_option("--rho", rho)->capture_default_str();
    sc1->add_option("--offsets", offsets)->delimiter(',');
    sc1->add_option("--budget", budget);
    add_common(sc1);
    sc1->callback([&] {
        if (offsets.empty()) offsets = {0.02, 0.01, 0.005};
        run_sweep_corner1(rho, offsets, budget, c);
    });

    auto* sc2 = app.add_subcommand("sweep-corner2",
                                   "approach the corner (-1/2,-1/2)");
    sc2->add_option("--rho", rho, "offset ratio direction")
        ->capture_default_str();
    sc2->add_option("--offsets", offsets)->delimiter(',');
    sc2->add_option("--budget", budget);
    sc2->add_option("--n-grid", n_grid);
    sc2->add_option("--trunc", trunc);
    sc2->add_option("--paths", paths, "0 disables simulation columns");
    add_common(sc2);
    sc2->callback([&] {
        if (offsets.empty()) offsets = {0.02, 0.01, 0.005};
        paths = sc2->count("--paths") ? paths : 0;
        run_sweep_corner2(rho, offsets, budget, n_grid, trunc, paths, c);
    });

    auto* nl = app.add_subcommand(
        "no-l2", "cross-covariance of nearby boundary approaches");
    nl->add_option("--case", which, "edge | corner1 | corner2")
        ->capture_default_str();
    nl->add_option("--r", rs, "offset ratios in (0,1]")->delimiter(',');
    nl->add_option("--offset", h, "base offset scale")->capture_default_str();
    nl->add_option("--gamma", gamma, "fixed edge exponent")
        ->capture_default_str();
    nl->add_option("--rho", rho, "corner direction")->capture_default_str();
    add_common(nl);
    nl->callback([&] {
        if (which == "edge" && !nl->count("--gamma")) gamma = -0.7;
        run_no_l2(which, rs, h, gamma, rho, c);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const budget_error& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (c.strict && !g_warnings.empty()) {
        std::cerr << "strict mode: " << g_warnings.size()
                  << " warning(s) treated as failure\n";
        return 1;
    }
    return 0;
}
