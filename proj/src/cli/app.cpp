#include "app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "coldatom/coolsolve.hpp"
#include "coldatom/expectation.hpp"
#include "coldatom/gridlab.hpp"
#include "coldatom/states.hpp"
#include "coldatom/thermal.hpp"
#include "svgplot.hpp"

namespace coldatom::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

double parse_suffixed(const std::string& text, const std::vector<std::pair<std::string, double>>& suffixes,
                      const char* what) {
    const std::string t = lower(text);
    double scale = 1.0;
    std::string digits = t;
    for (const auto& [suffix, factor] : suffixes) {
        if (t.size() > suffix.size() && t.ends_with(suffix)) {
            scale = factor;
            digits = t.substr(0, t.size() - suffix.size());
            break;
        }
    }
    char* end = nullptr;
    const double value = std::strtod(digits.c_str(), &end);
    if (end == digits.c_str() || *end != '\0' || !std::isfinite(value))
        throw UsageError(std::string("cannot parse ") + what + ": '" + text + "'");
    return value * scale;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out << content;
        if (!out.flush()) throw IoError("write failed for '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("cannot rename '" + tmp + "' to '" + path + "'");
}

states::ConstantSet constants_by_name(const std::string& name) {
    return name == "codata" ? states::codata_constants() : states::truncated_constants();
}

// ---- solve ----------------------------------------------------------------

struct SolveOpts {
    std::string omega;
    double tolerance = 1e-12;
};

int cmd_solve(const SolveOpts& o, const std::string& constants, bool angular) {
    const double omega = parse_omega(o.omega, angular);
    if (o.tolerance <= 0) throw UsageError("tolerance must be positive");
    const states::ConstantSet cs = constants_by_name(constants);
    const auto p = states::PhysParams::make(cs.hbar, cs.k_B, 1.0, omega, 0.0);
    const auto sol = coolsolve::solve_temperature(p, o.tolerance);
    const double t_uK = sol.T * 1e6;
    std::printf("omega      = %.12e s^-1\n", sol.omega);
    std::printf("x_star     = %.12e\n", sol.x_root);
    if (t_uK > 1000.0)
        std::printf("T          = %.6f uK (%.6f mK)\n", t_uK, sol.T * 1e3);
    else
        std::printf("T          = %.6f uK\n", t_uK);
    std::printf("residual   = %.3e\n", sol.residual);
    std::printf("iterations = %d\n", sol.iterations);
    std::printf("RESULT omega_hz=%.12e x_star=%.12e T_K=%.12e T_uK=%.12e residual=%.3e iterations=%d\n",
                sol.omega, sol.x_root, sol.T, t_uK, sol.residual, sol.iterations);
    return 0;
}

// ---- curves ---------------------------------------------------------------

struct CurvesOpts {
    std::string omega;
    std::string tmin, tmax;
    int points = 200;
    std::string csv_path, svg_path;
};

int cmd_curves(const CurvesOpts& o, const std::string& constants, bool angular) {
    const double omega = parse_omega(o.omega, angular);
    if (o.points < 2) throw UsageError("need at least two sample points");
    if (o.csv_path.empty() && o.svg_path.empty())
        throw UsageError("no output requested; pass --csv and/or --svg");
    const states::ConstantSet cs = constants_by_name(constants);
    const auto p = states::PhysParams::make(cs.hbar, cs.k_B, 1.0, omega, 0.0);
    const auto sol = coolsolve::solve_temperature(p);
    const double tmin = o.tmin.empty() ? sol.T / 4.0 : parse_temperature(o.tmin);
    const double tmax = o.tmax.empty() ? sol.T * 2.5 : parse_temperature(o.tmax);
    const auto table = coolsolve::curves_for_figure(p, tmin, tmax, o.points);

    if (!o.csv_path.empty()) {
        std::ostringstream csv;
        csv << "T_K,y1,y2\n";
        for (const auto& row : table)
            csv << csv_number(row.T) << ',' << csv_number(row.y1) << ',' << csv_number(row.y2)
                << '\n';
        write_file_atomic(o.csv_path, csv.str());
        std::printf("wrote %s (%zu rows)\n", o.csv_path.c_str(), table.size());
    }
    if (!o.svg_path.empty()) {
        std::vector<Series> series(2);
        series[0] = {"y1", "#1f77b4", {}};
        series[1] = {"y2", "#d62728", {}};
        for (const auto& row : table) {
            series[0].points.emplace_back(row.T * 1e6, row.y1);
            series[1].points.emplace_back(row.T * 1e6, row.y2);
        }
        char label[64];
        std::snprintf(label, sizeof(label), "T = %.6g uK", sol.T * 1e6);
        const Marker crossing{sol.T * 1e6, 1.0 / sol.x_root, label};
        write_file_atomic(o.svg_path,
                          line_chart_svg("cooling temperature crossing", "T (uK)", "y1, y2",
                                         series, {&crossing, 1}));
        std::printf("wrote %s\n", o.svg_path.c_str());
    }
    std::printf("crossing   T = %.6f uK (x_star = %.12e)\n", sol.T * 1e6, sol.x_root);
    return 0;
}

// ---- sweep ----------------------------------------------------------------

struct SweepOpts {
    std::string omega_min, omega_max;
    int count = 9;
    bool intercept_free = false;
    std::string csv_path, svg_path;
};

int cmd_sweep(const SweepOpts& o, const std::string& constants, bool angular) {
    const double lo = parse_omega(o.omega_min, angular);
    const double hi = parse_omega(o.omega_max, angular);
    if (!(lo < hi)) throw UsageError("omega-min must be below omega-max");
    if (o.count < 2) throw UsageError("sweep needs at least two points");
    const states::ConstantSet cs = constants_by_name(constants);
    const auto tmpl = states::PhysParams::make(cs.hbar, cs.k_B, 1.0, lo, 0.0);
    std::vector<double> omegas(o.count);
    for (int i = 0; i < o.count; ++i) omegas[i] = lo + (hi - lo) * i / (o.count - 1);
    const auto table = coolsolve::sweep(tmpl, omegas, o.intercept_free);

    if (!o.csv_path.empty()) {
        std::ostringstream csv;
        csv << "omega_hz,x_star,T_K\n";
        for (const auto& row : table.rows)
            csv << csv_number(row.omega) << ',' << csv_number(row.x_root) << ','
                << csv_number(row.T) << '\n';
        write_file_atomic(o.csv_path, csv.str());
        std::printf("wrote %s (%zu rows)\n", o.csv_path.c_str(), table.rows.size());
    }
    if (!o.svg_path.empty()) {
        Series points{"T(omega)", "#1f77b4", {}};
        Series fit{"fit", "#d62728", {}};
        for (const auto& row : table.rows)
            points.points.emplace_back(row.omega / 1e3, row.T * 1e6);
        fit.points.emplace_back(table.rows.front().omega / 1e3,
                                (table.slope * table.rows.front().omega + table.intercept) * 1e6);
        fit.points.emplace_back(table.rows.back().omega / 1e3,
                                (table.slope * table.rows.back().omega + table.intercept) * 1e6);
        const std::vector<Series> series{points, fit};
        write_file_atomic(o.svg_path, line_chart_svg("cooling temperature vs trap frequency",
                                                     "omega (kHz)", "T (uK)", series, {}));
        std::printf("wrote %s\n", o.svg_path.c_str());
    }
    std::printf("slope      = %.6e uK/kHz\n", table.slope_uK_per_kHz);
    std::printf("intercept  = %.6e K\n", table.intercept);
    std::printf("max_resid  = %.3e K\n", table.max_fit_residual);
    std::printf("RESULT slope_uK_per_kHz=%.12e intercept_K=%.12e max_fit_residual_K=%.3e count=%d\n",
                table.slope_uK_per_kHz, table.intercept, table.max_fit_residual, o.count);
    return 0;
}

// ---- expect ---------------------------------------------------------------

struct ParamOpts {
    double hbar = 1.0, k_B = 1.0, mass = 1.0, damping = 0.0;
    std::string omega = "1";
};

states::PhysParams expect_params(const ParamOpts& o, bool angular) {
    return states::PhysParams::make(o.hbar, o.k_B, o.mass, parse_omega(o.omega, angular),
                                    o.damping);
}

struct ExpectOpts {
    std::string coeffs;
    double t = 0.0;
    ParamOpts params;
};

int cmd_expect(const ExpectOpts& o, bool angular) {
    if (o.t < 0) throw UsageError("time must be non-negative");
    const states::PhysParams p = expect_params(o.params, angular);
    std::ifstream in(o.coeffs);
    if (!in) throw IoError("cannot open coefficient file '" + o.coeffs + "'");
    states::Superposition state = states::load_coefficients(in, p);
    if (!state.unit_norm(1e-9)) {
        std::fprintf(stderr,
                     "notice: input squared norm 2*sum|C|^2 = %.12g is not 1; rescaling\n",
                     2.0 * state.sum_abs2());
        state.rescale_to_unit_norm();
    }
    // report in the particular-solution convention (sum|C|^2 = 1), the
    // normalization under which a lone ground state gives <v_x^2> = hbar w/m
    for (auto& [mode, c] : state.coeffs) c *= std::numbers::sqrt2;
    const auto m = expect::moments(state, p, o.t);
    const auto avg = expect::period_averaged_v2(state, p, o.t);
    std::printf("t = %.9g\n", o.t);
    std::printf("axis  %-17s %-17s %s\n", "<v>", "<v^2>", "period-avg <v^2>");
    const char* names[3] = {"x", "y", "z"};
    for (int d = 0; d < 3; ++d)
        std::printf("%-5s %17.9e %17.9e %17.9e\n", names[d], m.mean_v[d], m.mean_v2[d], avg[d]);
    std::printf("RESULT t=%.9e vx=%.12e vy=%.12e vz=%.12e v2x=%.12e v2y=%.12e v2z=%.12e "
                "pv2x=%.12e pv2y=%.12e pv2z=%.12e\n",
                o.t, m.mean_v[0], m.mean_v[1], m.mean_v[2], m.mean_v2[0], m.mean_v2[1],
                m.mean_v2[2], avg[0], avg[1], avg[2]);
    return 0;
}

// ---- evolve ---------------------------------------------------------------

struct EvolveOpts {
    int points = 1024;
    double half_width_losc = 8.0;
    int steps_per_period = 1024;
    double periods = 1.0;
    std::string initial = "eigenstate:0";
    std::string csv_path;
    ParamOpts params;
};

gridlab::GridState build_initial(const std::string& text, const states::PhysParams& p,
                                 const gridlab::GridSpec& spec) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "eigenstate") {
        const int n = arg.empty() ? 0 : std::stoi(arg);
        if (n < 0) throw UsageError("eigenstate index must be non-negative");
        return gridlab::eigenstate_data(p, spec, n);
    }
    if (kind == "coeffs") {
        std::ifstream in(arg);
        if (!in) throw IoError("cannot open coefficient file '" + arg + "'");
        return gridlab::superposition_data_x(p, spec, states::load_coefficients(in, p));
    }
    if (kind == "gaussian") {
        const double x0 = arg.empty() ? 1.0 : std::stod(arg);
        return gridlab::displaced_gaussian(p, spec, x0 / p.axis().alpha);
    }
    throw UsageError("unknown initial state '" + text +
                     "' (use eigenstate:N, coeffs:PATH or gaussian:X0)");
}

int cmd_evolve(const EvolveOpts& o, bool angular) {
    const states::PhysParams p = expect_params(o.params, angular);
    if (o.csv_path.empty()) throw UsageError("evolve needs --csv");
    if (o.periods <= 0 || o.steps_per_period <= 0) throw UsageError("invalid evolution length");
    gridlab::GridSpec spec = gridlab::GridSpec::for_params(p, o.points, o.periods,
                                                           o.steps_per_period);
    spec.half_width = o.half_width_losc / p.axis().alpha;
    if (spec.steps < 1)
        throw UsageError("evolution is empty; increase --periods or --steps-per-period");
    spec.validate(p);
    gridlab::Simulation sim(p, spec, build_initial(o.initial, p, spec));

    std::ostringstream csv;
    csv << "t,norm2,v2_raw,v2_normalized\n";
    std::vector<double> ts, lognorms;
    const auto record = [&]() {
        const double n2 = sim.norm2();
        const double v2 = sim.measure_v2();
        csv << csv_number(sim.state().t) << ',' << csv_number(n2) << ',' << csv_number(v2) << ','
            << csv_number(v2 / n2) << '\n';
        ts.push_back(sim.state().t);
        lognorms.push_back(std::log(n2));
    };
    record();
    for (int i = 0; i < spec.steps; ++i) {
        sim.step();
        record();
    }
    write_file_atomic(o.csv_path, csv.str());

    // least-squares slope of ln(norm2) against t
    const double n = double(ts.size());
    double tbar = 0, ybar = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        tbar += ts[i];
        ybar += lognorms[i];
    }
    tbar /= n;
    ybar /= n;
    double num = 0, den = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        num += (ts[i] - tbar) * (lognorms[i] - ybar);
        den += (ts[i] - tbar) * (ts[i] - tbar);
    }
    const double fitted_exponent = -num / den;
    const double expected = 6.0 * p.damping / p.mass;
    const double rel_error =
        expected > 0 ? std::abs(fitted_exponent - expected) / expected : std::abs(fitted_exponent);
    std::printf("wrote %s (%zu rows)\n", o.csv_path.c_str(), ts.size());
    std::printf("fitted norm2 decay exponent = %.12e (expected 6k/m = %.12e)\n", fitted_exponent,
                expected);
    std::printf("relative error              = %.3e\n", rel_error);
    std::printf("RESULT decay_exponent=%.12e expected=%.12e rel_error=%.3e steps=%d\n",
                fitted_exponent, expected, rel_error, spec.steps);
    return 0;
}

// ---- thermal --------------------------------------------------------------

int cmd_thermal(double x) {
    if (!(x > 0) || !std::isfinite(x)) throw UsageError("x must be positive and finite");
    const auto closed = thermal::series_s0(x, thermal::S0Method::closed);
    const auto partial = thermal::series_s0(x, thermal::S0Method::partial);
    const double y1 = coolsolve::lhs_y1(x);
    if (closed.conditioning_warning)
        std::fprintf(stderr, "warning: closed form ill-conditioned for x = %g\n", x);
    std::printf("x          = %.9g\n", x);
    std::printf("S0_closed  = %.12e\n", closed.value);
    std::printf("S0_partial = %.12e\n", partial.value);
    std::printf("S          = %.12e\n", closed.value / 6.0);
    std::printf("y1         = %.12e\n", y1);
    std::printf("RESULT x=%.9e s0_closed=%.12e s0_partial=%.12e s=%.12e y1=%.12e\n", x,
                closed.value, partial.value, closed.value / 6.0, y1);
    return 0;
}

}  // namespace

double parse_omega(const std::string& text, bool angular_2pi) {
    const double value = parse_suffixed(
        text, {{"ghz", 1e9}, {"mhz", 1e6}, {"khz", 1e3}, {"hz", 1.0}}, "frequency");
    if (!(value > 0)) throw UsageError("omega must be positive: '" + text + "'");
    return angular_2pi ? 2.0 * std::numbers::pi * value : value;
}

double parse_temperature(const std::string& text) {
    const double value = parse_suffixed(
        text, {{"nk", 1e-9}, {"uk", 1e-6}, {"mk", 1e-3}, {"k", 1.0}}, "temperature");
    if (!(value > 0)) throw UsageError("temperature must be positive: '" + text + "'");
    return value;
}

std::string csv_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.8e", v);
    return buf;
}

int run(int argc, const char* const* argv) {
    CLI::App app{"damped harmonic oscillator laser-cooling calculator"};
    app.set_config("--config", "", "plain 'key = value' configuration file");
    app.require_subcommand(1);

    std::string constants = "truncated";
    app.add_option("--constants", constants, "constant set (truncated or codata)")
        ->check(CLI::IsMember({"truncated", "codata"}))
        ->envname("COLDATOM_CONSTANTS");
    bool angular = false;
    app.add_flag("--angular-2pi", angular, "interpret frequencies as 2*pi*f");

    SolveOpts solve;
    CLI::App* solve_cmd = app.add_subcommand("solve", "solve the cooling-temperature equation");
    solve_cmd->fallthrough();
    solve_cmd->add_option("--omega", solve.omega, "trap frequency, e.g. 100khz")->required();
    solve_cmd->add_option("--tolerance", solve.tolerance, "relative root tolerance");

    CurvesOpts curves;
    CLI::App* curves_cmd = app.add_subcommand("curves", "tabulate y1 and y2 against T");
    curves_cmd->fallthrough();
    curves_cmd->add_option("--omega", curves.omega, "trap frequency")->required();
    curves_cmd->add_option("--tmin", curves.tmin, "range start, e.g. 0.05uk");
    curves_cmd->add_option("--tmax", curves.tmax, "range end, e.g. 1uk");
    curves_cmd->add_option("--points", curves.points, "sample count");
    curves_cmd->add_option("--csv", curves.csv_path, "CSV output path");
    curves_cmd->add_option("--svg", curves.svg_path, "SVG output path");

    SweepOpts sweep;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "temperature vs frequency with linear fit");
    sweep_cmd->fallthrough();
    sweep_cmd->add_option("--omega-min", sweep.omega_min, "lowest frequency")->required();
    sweep_cmd->add_option("--omega-max", sweep.omega_max, "highest frequency")->required();
    sweep_cmd->add_option("--count", sweep.count, "number of frequencies");
    sweep_cmd->add_flag("--intercept-free", sweep.intercept_free,
                        "fit an intercept instead of constraining through the origin");
    sweep_cmd->add_option("--csv", sweep.csv_path, "CSV output path");
    sweep_cmd->add_option("--svg", sweep.svg_path, "SVG output path");

    ExpectOpts expect_opts;
    CLI::App* expect_cmd =
        app.add_subcommand("expect", "velocity moments of a coefficient-file state");
    expect_cmd->fallthrough();
    expect_cmd->add_option("--coeffs", expect_opts.coeffs, "coefficient file")->required();
    expect_cmd->add_option("--t", expect_opts.t, "evaluation time");
    expect_cmd->add_option("--mass", expect_opts.params.mass, "mass (default 1)");
    expect_cmd->add_option("--omega", expect_opts.params.omega, "trap frequency (default 1)");
    expect_cmd->add_option("--damping", expect_opts.params.damping, "damping k (default 0)");
    expect_cmd->add_option("--hbar", expect_opts.params.hbar, "hbar (default 1)");
    expect_cmd->add_option("--kb", expect_opts.params.k_B, "k_B (default 1)");

    EvolveOpts evolve;
    CLI::App* evolve_cmd = app.add_subcommand("evolve", "integrate the damped wave equation");
    evolve_cmd->fallthrough();
    evolve_cmd->add_option("--points", evolve.points, "grid points");
    evolve_cmd->add_option("--half-width-losc", evolve.half_width_losc,
                           "box half-width in oscillator lengths");
    evolve_cmd->add_option("--steps-per-period", evolve.steps_per_period, "steps per period");
    evolve_cmd->add_option("--periods", evolve.periods, "number of periods");
    evolve_cmd->add_option("--initial", evolve.initial,
                           "eigenstate:N, coeffs:PATH or gaussian:X0 (X0 in osc. lengths)");
    evolve_cmd->add_option("--csv", evolve.csv_path, "time-series CSV path")->required();
    evolve_cmd->add_option("--mass", evolve.params.mass, "mass (default 1)");
    evolve_cmd->add_option("--omega", evolve.params.omega, "trap frequency (default 1)");
    evolve_cmd->add_option("--damping", evolve.params.damping, "damping k (default 0)");
    evolve_cmd->add_option("--hbar", evolve.params.hbar, "hbar (default 1)");
    evolve_cmd->add_option("--kb", evolve.params.k_B, "k_B (default 1)");

    double thermal_x = 0.0;
    CLI::App* thermal_cmd =
        app.add_subcommand("thermal", "series S0, S and the <v_x^2> factor at a given x");
    thermal_cmd->fallthrough();
    thermal_cmd->add_option("--x", thermal_x, "dimensionless hbar*omega/(k_B T)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (solve_cmd->parsed()) return cmd_solve(solve, constants, angular);
        if (curves_cmd->parsed()) return cmd_curves(curves, constants, angular);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep, constants, angular);
        if (expect_cmd->parsed()) return cmd_expect(expect_opts, angular);
        if (evolve_cmd->parsed()) return cmd_evolve(evolve, angular);
        if (thermal_cmd->parsed()) return cmd_thermal(thermal_x);
        return 2;
    } catch (const states::CoeffParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::out_of_range& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const coolsolve::BracketError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 3;
    } catch (const coolsolve::MultipleCrossingsError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 3;
    } catch (const gridlab::InstabilityError& e) {
        std::fprintf(stderr, "instability: %s\n", e.what());
        return 3;
    } catch (const osc::QuadratureError& e) {
        std::fprintf(stderr, "non-convergence: %s\n", e.what());
        return 3;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 4;
    }
}

}  // namespace coldatom::cli
