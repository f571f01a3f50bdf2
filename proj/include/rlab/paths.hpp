#pragma once
// Shared path-ensemble container produced by both the lattice simulator and
// the boundary-law samplers.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rlab {

struct EnsembleMeta {
    std::string label;          // generator tag ("lattice", "fbm", "corner-y", ...)
    double g1 = 0.0, g2 = 0.0;  // exponent pair when produced by the simulator
    std::uint64_t seed = 0;
    double a_norm = 0.0;        // continuum normalizer applied before rescale
    double rescale = 1.0;       // empirical unit-variance correction at t=1
    double raw_var1 = 0.0;      // ensemble variance at t=1 before rescale
    double tail_var1 = 0.0;     // truncated-coefficient tail variance, series 1
    double tail_var2 = 0.0;     //   "  series 2
    double fbm_max_clip = 0.0;  // largest clipped circulant eigenvalue magnitude
    bool var_warning = false;   // raw_var1 off the unit target by more than 5%
};

// paths[p][k] is path p at time grid[k]; grid starts at 0 and every path
// starts at 0.
struct PathEnsemble {
    std::vector<double> grid;
    std::vector<std::vector<double>> paths;
    EnsembleMeta meta;
};

// Column of values across paths at grid time t (exact grid match required;
// throws std::invalid_argument if t is not a grid point).
std::vector<double> marginal_at(const PathEnsemble& e, double t);

// Columnar CSV: header "t,path_0,...,path_{k-1}", one row per grid time,
// values printed with 17 significant digits so round-trips are exact.
void write_ensemble_csv(std::ostream& os, const PathEnsemble& e);

// Shortest decimal that round-trips a double (%.17g).
std::string fmt_g17(double x);

}  // namespace rlab
