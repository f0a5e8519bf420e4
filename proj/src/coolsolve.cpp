#include "coldatom/coolsolve.hpp"

#include <cmath>
#include <future>
#include <utility>

#include "coldatom/thermal.hpp"

namespace coldatom::coolsolve {

double lhs_y1(double x) { return thermal::vx2_factor(x); }

namespace {

double g(double x) { return lhs_y1(x) - 1.0 / x; }

constexpr int kScanPoints = 2048;

}  // namespace

RootResult solve_x_star(double rel_tolerance, double lo, double hi) {
    if (!(rel_tolerance > 0)) throw std::invalid_argument("tolerance must be positive");
    if (!(0 < lo && lo < hi)) throw std::invalid_argument("invalid scan interval");

    double a = 0.0, b = 0.0;
    int crossings = 0;
    double x_prev = lo, g_prev = g(lo);
    for (int i = 1; i <= kScanPoints; ++i) {
        const double x = lo + (hi - lo) * i / kScanPoints;
        const double gx = g(x);
        if ((g_prev < 0) != (gx < 0)) {
            ++crossings;
            a = x_prev;
            b = x;
        }
        x_prev = x;
        g_prev = gx;
    }
    if (crossings == 0)
        throw BracketError("no sign change of y1(x) - 1/x on the scan interval");
    if (crossings > 1)
        throw MultipleCrossingsError("sign scan found more than one crossing");

    const bool rising = g(a) < 0;
    int iterations = 0;
    while (b - a > rel_tolerance * a) {
        const double mid = 0.5 * (a + b);
        if ((g(mid) < 0) == rising)
            a = mid;
        else
            b = mid;
        ++iterations;
        if (iterations > 200) break;
    }
    const double root = 0.5 * (a + b);
    return {root, iterations, std::abs(g(root))};
}

CoolingSolution solve_temperature(const PhysParams& p, double rel_tolerance) {
    const RootResult root = solve_x_star(rel_tolerance);
    const double T = p.hbar * p.omega / (p.k_B * root.x_root);
    return {p.omega, root.x_root, T, root.iterations, root.residual};
}

SweepTable sweep(const PhysParams& tmpl, std::span<const double> omegas, bool intercept_free) {
    if (omegas.empty()) throw std::invalid_argument("sweep needs at least one omega");
    for (double w : omegas)
        if (!(w > 0) || !std::isfinite(w))
            throw std::invalid_argument("sweep omegas must be positive");

    SweepTable table;
    table.rows.resize(omegas.size());
    auto solve_one = [&](std::size_t i) {
        PhysParams p = PhysParams::make(tmpl.hbar, tmpl.k_B, tmpl.mass, omegas[i], tmpl.damping);
        table.rows[i] = solve_temperature(p);
    };
    if (omegas.size() >= 16) {
        std::vector<std::future<void>> jobs;
        jobs.reserve(omegas.size());
        for (std::size_t i = 0; i < omegas.size(); ++i)
            jobs.push_back(std::async(std::launch::async, solve_one, i));
        for (auto& j : jobs) j.get();
    } else {
        for (std::size_t i = 0; i < omegas.size(); ++i) solve_one(i);
    }

    double sww = 0.0, swt = 0.0, sw = 0.0, st = 0.0;
    const double n = double(table.rows.size());
    for (const CoolingSolution& row : table.rows) {
        sww += row.omega * row.omega;
        swt += row.omega * row.T;
        sw += row.omega;
        st += row.T;
    }
    if (intercept_free && table.rows.size() >= 2 && n * sww - sw * sw != 0.0) {
        table.slope = (n * swt - sw * st) / (n * sww - sw * sw);
        table.intercept = (st - table.slope * sw) / n;
    } else {
        table.slope = swt / sww;
        table.intercept = 0.0;
    }
    table.slope_uK_per_kHz = table.slope * 1e9;  // K/(1/s) -> uK/kHz
    table.max_fit_residual = 0.0;
    for (const CoolingSolution& row : table.rows)
        table.max_fit_residual = std::max(
            table.max_fit_residual, std::abs(row.T - table.slope * row.omega - table.intercept));
    return table;
}

std::vector<CurvePoint> curves_for_figure(const PhysParams& p, double t_min, double t_max,
                                          int count) {
    if (!(t_min > 0) || !(t_max > t_min)) throw std::invalid_argument("invalid temperature range");
    if (count < 2) throw std::invalid_argument("need at least two samples");
    std::vector<CurvePoint> points;
    points.reserve(count);
    const double scale = p.hbar * p.omega / p.k_B;  // x = scale / T
    for (int i = 0; i < count; ++i) {
        const double T = t_min + (t_max - t_min) * i / (count - 1);
        points.push_back({T, lhs_y1(scale / T), T / scale});
    }
    return points;
}

}  // namespace coldatom::coolsolve
