#pragma once
// Boltzmann occupation of the oscillator levels (degeneracy ignored in the
// partition sum, each level split equally among its f(N) states with the
// extra 1/2 convention weight), the series S0 with its closed form, and the
// thermal <v_x^2>.

#include <vector>

#include "coldatom/states.hpp"

namespace coldatom::thermal {

using states::Mode3;
using states::PhysParams;

// x is the dimensionless inverse temperature hbar*omega/(k_B T); all entry
// points reject x <= 0 or non-finite x with std::domain_error.

// P_N = (1 - e^-x) e^{-N x}
double level_probability(double x, int shell);

// P_N / (2 f(N)); the quantity written |C|^2 e^{-6kt/m} in the per-state tables
double state_weight(double x, const Mode3& mode);

enum class S0Method { closed, partial };

struct S0Result {
    double value;
    bool conditioning_warning;  // closed form only: denominator ~ x^2 for x < 1e-8
};

// S0 = 5e^-x + 7e^-2x + 9e^-3x + ... = (5e^-x - 3e^-2x)/(1 - e^-x)^2
S0Result series_s0(double x, S0Method method);

// (1 - e^-x)(1/2 + S0(x)/6), the dimensionless factor (m / hbar omega) <v_x^2>
double vx2_factor(double x);

// (hbar omega / m) * vx2_factor(x)
double thermal_vx2(const PhysParams& p, double x);

struct ThermalEnsemble {
    double x;
    int n_cut;
    std::vector<double> level_prob;    // P_N, N = 0..n_cut
    std::vector<double> state_weight;  // w_N, N = 0..n_cut

    // n_cut is the smallest N with e^{-Nx} < 1e-18, capped at 1e5
    static ThermalEnsemble at_x(double x);
};

}  // namespace coldatom::thermal
