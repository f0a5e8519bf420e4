#include <doctest.h>

#include <cmath>

#include "coldatom/coolsolve.hpp"
#include "coldatom/thermal.hpp"

namespace coolsolve = coldatom::coolsolve;
namespace states = coldatom::states;
namespace thermal = coldatom::thermal;

namespace {

states::PhysParams truncated_params(double omega) {
    const auto cs = states::truncated_constants();
    return states::PhysParams::make(cs.hbar, cs.k_B, 1.0, omega, 0.0);
}

// frozen from an independent bisection of the same transcendental equation
constexpr double kXStar = 1.755481883518986;

}  // namespace

TEST_SUITE("coolsolve") {

TEST_CASE("y1 limits and identities") {
    CHECK(std::abs(coolsolve::lhs_y1(50.0) - 0.5) < 1e-15);
    CHECK(coolsolve::lhs_y1(1.0) == thermal::vx2_factor(1.0));
    CHECK(coolsolve::lhs_y1(1.7555) == doctest::Approx(0.56963).epsilon(1e-4));
    // small-x behaviour: y1 ~ x/2 + 1/(3x)
    const double x = 0.01;
    CHECK(coolsolve::lhs_y1(x) == doctest::Approx(x / 2 + 1.0 / (3 * x)).epsilon(1e-2));
}

TEST_CASE("the sign scan sees g < 0 low and g > 0 high") {
    CHECK(coolsolve::lhs_y1(0.1) - 10.0 < 0.0);
    CHECK(coolsolve::lhs_y1(50.0) - 0.02 > 0.0);
}

TEST_CASE("solve_x_star finds the frozen root") {
    const auto root = coolsolve::solve_x_star(1e-12);
    CHECK(std::abs(root.x_root - kXStar) < 1e-9);
    CHECK(root.residual < 1e-11);
    CHECK(root.iterations > 10);
    CHECK_THROWS_AS(coolsolve::solve_x_star(0.0), std::invalid_argument);
}

TEST_CASE("g changes sign exactly once on [0.05, 50] at 1e4 points") {
    int changes = 0;
    double prev = coolsolve::lhs_y1(0.05) - 1.0 / 0.05;
    for (int i = 1; i <= 10000; ++i) {
        const double x = 0.05 + (50.0 - 0.05) * i / 10000.0;
        const double g = coolsolve::lhs_y1(x) - 1.0 / x;
        if ((prev < 0) != (g < 0)) ++changes;
        prev = g;
    }
    CHECK(changes == 1);
}

TEST_CASE("no crossing on a sub-interval raises BracketError") {
    CHECK_THROWS_AS(coolsolve::solve_x_star(1e-12, 30.0, 50.0), coolsolve::BracketError);
    CHECK_THROWS_AS(coolsolve::solve_x_star(1e-12, 0.05, 0.5), coolsolve::BracketError);
}

TEST_CASE("truncated-constant golden temperatures") {
    const auto t100 = coolsolve::solve_temperature(truncated_params(1e5));
    CHECK(std::abs(t100.T * 1e6 - 0.433425) / 0.433425 < 1e-4);
    const auto t500 = coolsolve::solve_temperature(truncated_params(5e5));
    CHECK(std::abs(t500.T * 1e6 - 2.167125) / 2.167125 < 1e-4);
    const auto t900 = coolsolve::solve_temperature(truncated_params(9e5));
    CHECK(std::abs(t900.T * 1e6 - 3.90082) / 3.90082 < 1e-4);
    const auto ghz = coolsolve::solve_temperature(truncated_params(6.175e9));
    CHECK(std::abs(ghz.T * 1e3 - 26.76) / 26.76 < 1e-3);
}

TEST_CASE("sweep reproduces the linear law") {
    std::vector<double> omegas;
    for (int i = 1; i <= 9; ++i) omegas.push_back(1e5 * i);
    const auto table = coolsolve::sweep(truncated_params(1e5), omegas);
    REQUIRE(table.rows.size() == 9);
    CHECK(std::abs(table.slope_uK_per_kHz - 4.334e-3) / 4.334e-3 < 1e-3);
    CHECK(table.intercept == 0.0);
    double max_T = 0.0;
    for (const auto& row : table.rows) max_T = std::max(max_T, row.T);
    CHECK(table.max_fit_residual < 1e-6 * max_T);
    for (const auto& row : table.rows)
        CHECK(std::abs(row.x_root - table.rows.front().x_root) <= 1e-10 * row.x_root);
    // monotone increasing
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        CHECK(table.rows[i].T > table.rows[i - 1].T);
}

TEST_CASE("single-omega sweep slope degenerates to T/omega") {
    const double omega = 3.3e5;
    const auto table = coolsolve::sweep(truncated_params(omega), {{omega}});
    CHECK(table.slope == table.rows[0].T / omega);
    CHECK(table.intercept == 0.0);
}

TEST_CASE("the root is omega-invariant so T/omega is a constant") {
    double first_x = 0.0, first_ratio = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double omega = 1e3 * std::pow(1e7, i / 19.0);  // 1e3 .. 1e10
        const auto sol = coolsolve::solve_temperature(truncated_params(omega));
        if (i == 0) {
            first_x = sol.x_root;
            first_ratio = sol.T / omega;
        }
        CHECK(std::abs(sol.x_root - first_x) <= 1e-11 * first_x);
        CHECK(std::abs(sol.T / omega - first_ratio) <= 1e-11 * first_ratio);
    }
}

TEST_CASE("intercept-free fit stays consistent on perfectly linear data") {
    std::vector<double> omegas{1e5, 3e5, 5e5, 7e5, 9e5};
    const auto table = coolsolve::sweep(truncated_params(1e5), omegas, true);
    CHECK(std::abs(table.intercept) < 1e-12 * table.rows.back().T);
    CHECK(std::abs(table.slope_uK_per_kHz - 4.334e-3) / 4.334e-3 < 1e-3);
}

TEST_CASE("figure curves bracket the solved temperature") {
    struct Case {
        double omega, t_lo_uK, t_hi_uK, golden_uK;
    };
    for (const auto& c : {Case{1e5, 0.05, 1.0, 0.433425}, Case{5e5, 0.5, 4.0, 2.167125},
                          Case{9e5, 1.0, 6.0, 3.90082}}) {
        const auto p = truncated_params(c.omega);
        const auto curve = coolsolve::curves_for_figure(p, c.t_lo_uK * 1e-6, c.t_hi_uK * 1e-6, 200);
        REQUIRE(curve.size() == 200);
        int sign_changes = 0;
        double bracket_lo = 0.0, bracket_hi = 0.0;
        for (std::size_t i = 1; i < curve.size(); ++i) {
            const double prev = curve[i - 1].y1 - curve[i - 1].y2;
            const double cur = curve[i].y1 - curve[i].y2;
            if ((prev < 0) != (cur < 0)) {
                ++sign_changes;
                bracket_lo = curve[i - 1].T;
                bracket_hi = curve[i].T;
            }
        }
        CHECK(sign_changes == 1);
        CHECK(bracket_lo < c.golden_uK * 1e-6);
        CHECK(bracket_hi > c.golden_uK * 1e-6);
    }
}

TEST_CASE("y2 is linear in T with slope k_B/(hbar omega)") {
    const auto p = truncated_params(1e5);
    const auto curve = coolsolve::curves_for_figure(p, 1e-7, 1e-6, 10);
    const double slope = (curve[9].y2 - curve[0].y2) / (curve[9].T - curve[0].T);
    CHECK(slope == doctest::Approx(p.k_B / (p.hbar * p.omega)).epsilon(1e-12));
    CHECK_THROWS_AS(coolsolve::curves_for_figure(p, 1e-7, 1e-6, 1), std::invalid_argument);
    CHECK_THROWS_AS(coolsolve::curves_for_figure(p, -1e-7, 1e-6, 10), std::invalid_argument);
}

TEST_CASE("CODATA constants move the prediction by less than half a percent") {
    const auto base = coolsolve::solve_temperature(truncated_params(1e5));
    const auto cs = states::codata_constants();
    const auto codata = coolsolve::solve_temperature(
        states::PhysParams::make(cs.hbar, cs.k_B, 1.0, 1e5, 0.0));
    CHECK(std::abs(codata.T / base.T - 1.0) < 0.005);
    CHECK(codata.x_root == base.x_root);  // the root is dimensionless
}

}  // TEST_SUITE
