#include "coldatom/thermal.hpp"

#include <cmath>
#include <stdexcept>

namespace coldatom::thermal {

namespace {

void check_x(double x) {
    if (!(x > 0) || !std::isfinite(x))
        throw std::domain_error("inverse temperature x must be positive and finite");
}

// 1 - e^-x without cancellation at small x
double one_minus_exp(double x) { return -std::expm1(-x); }

}  // namespace

double level_probability(double x, int shell) {
    check_x(x);
    if (shell < 0) throw std::domain_error("shell number must be non-negative");
    return one_minus_exp(x) * std::exp(-double(shell) * x);
}

double state_weight(double x, const Mode3& mode) {
    const int shell = mode.shell();
    return level_probability(x, shell) / (2.0 * double(states::degeneracy(shell)));
}

S0Result series_s0(double x, S0Method method) {
    check_x(x);
    if (method == S0Method::closed) {
        const double em = one_minus_exp(x);
        const double ex = std::exp(-x);
        return {(5.0 * ex - 3.0 * ex * ex) / (em * em), x < 1e-8};
    }
    double sum = 0.0;
    for (long long n = 1; n <= 100000; ++n) {
        const double term = (2.0 * n + 3.0) * std::exp(-double(n) * x);
        sum += term;
        if (term < 1e-16 * sum) break;
    }
    return {sum, false};
}

double vx2_factor(double x) {
    return one_minus_exp(x) * (0.5 + series_s0(x, S0Method::closed).value / 6.0);
}

double thermal_vx2(const PhysParams& p, double x) {
    return p.hbar * p.omega / p.mass * vx2_factor(x);
}

ThermalEnsemble ThermalEnsemble::at_x(double x) {
    check_x(x);
    // smallest N with e^{-Nx} < 1e-18
    const double cut = std::ceil(18.0 * std::log(10.0) / x);
    const int n_cut = static_cast<int>(std::min(cut, 1e5));
    ThermalEnsemble e;
    e.x = x;
    e.n_cut = n_cut;
    e.level_prob.resize(n_cut + 1);
    e.state_weight.resize(n_cut + 1);
    for (int n = 0; n <= n_cut; ++n) {
        e.level_prob[n] = level_probability(x, n);
        e.state_weight[n] = e.level_prob[n] / (2.0 * double(states::degeneracy(n)));
    }
    return e;
}

}  // namespace coldatom::thermal
