#pragma once
// Cooling-temperature equation: the crossing of y1(x) with 1/x in the
// dimensionless inverse temperature x = hbar*omega/(k_B T), solved by sign
// scan plus bisection. T = hbar*omega/(k_B x*) is then linear in omega,
// which the sweep and its origin-constrained fit make explicit.

#include <span>
#include <stdexcept>
#include <vector>

#include "coldatom/states.hpp"

namespace coldatom::coolsolve {

using states::PhysParams;

// left side of the temperature equation as a function of x alone
double lhs_y1(double x);

struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MultipleCrossingsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RootResult {
    double x_root;
    int iterations;
    double residual;  // |y1(x*) - 1/x*|
};

// Scans g(x) = y1(x) - 1/x for sign changes on [lo, hi] (exactly one is
// expected), then bisects to |dx| < rel_tolerance * x. The two failure
// modes are reported distinctly: BracketError when no sign change is found
// and MultipleCrossingsError when the scan sees more than one.
RootResult solve_x_star(double rel_tolerance = 1e-12, double lo = 0.05, double hi = 50.0);

struct CoolingSolution {
    double omega;   // 1/s
    double x_root;  // dimensionless
    double T;       // K, = hbar*omega/(k_B * x_root)
    int iterations;
    double residual;
};

CoolingSolution solve_temperature(const PhysParams& p, double rel_tolerance = 1e-12);

struct SweepTable {
    std::vector<CoolingSolution> rows;  // input order
    double slope;                       // K s
    double intercept;                   // K (0 for the origin-constrained fit)
    double slope_uK_per_kHz;
    double max_fit_residual;            // max |T - slope*omega - intercept|
};

// Solves every omega and least-squares fits T against omega. The fit is
// constrained through the origin unless intercept_free is set.
SweepTable sweep(const PhysParams& tmpl, std::span<const double> omegas,
                 bool intercept_free = false);

struct CurvePoint {
    double T;   // K
    double y1;  // lhs_y1(hbar*omega/(k_B T))
    double y2;  // k_B T/(hbar*omega)
};

// Tabulates y1 and y2 over [t_min, t_max] (Kelvin) for plotting.
std::vector<CurvePoint> curves_for_figure(const PhysParams& p, double t_min, double t_max,
                                          int count);

}  // namespace coldatom::coolsolve
