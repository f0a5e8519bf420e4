#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "app.hpp"

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

const std::string& temp_dir() {
    static const std::string dir = [] {
        std::string tmpl = "/tmp/coldatom_cli_XXXXXX";
        char* made = mkdtemp(tmpl.data());
        REQUIRE(made != nullptr);
        return std::string(made);
    }();
    return dir;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    const std::string out_path = temp_dir() + "/out" + std::to_string(counter);
    const std::string err_path = temp_dir() + "/err" + std::to_string(counter);
    ++counter;
    const std::string command = env_prefix + " " + std::string(COLDATOM_BIN) + " " + args +
                                " >" + out_path + " 2>" + err_path;
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

// parse the key=value fields of the last RESULT line
std::map<std::string, std::string> result_fields(const std::string& out,
                                                 std::vector<std::string>* order = nullptr) {
    std::map<std::string, std::string> fields;
    std::istringstream lines(out);
    std::string line, result_line;
    while (std::getline(lines, line))
        if (line.rfind("RESULT ", 0) == 0) result_line = line;
    REQUIRE(!result_line.empty());
    std::istringstream tokens(result_line.substr(7));
    std::string token;
    while (tokens >> token) {
        const auto eq = token.find('=');
        REQUIRE(eq != std::string::npos);
        fields[token.substr(0, eq)] = token.substr(eq + 1);
        if (order) order->push_back(token.substr(0, eq));
    }
    return fields;
}

double field_as_double(const std::map<std::string, std::string>& fields, const std::string& key) {
    REQUIRE(fields.count(key) == 1);
    return std::stod(fields.at(key));
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::vector<std::string> cells;
        std::istringstream cs(line);
        std::string cell;
        while (std::getline(cs, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::string write_coeffs(const std::string& name, const std::string& content) {
    const std::string path = temp_dir() + "/" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("omega and temperature suffix parsing") {
    CHECK(coldatom::cli::parse_omega("100khz", false) == doctest::Approx(1e5));
    CHECK(coldatom::cli::parse_omega("6.175GHz", false) == doctest::Approx(6.175e9));
    CHECK(coldatom::cli::parse_omega("250", false) == doctest::Approx(250.0));
    CHECK(coldatom::cli::parse_omega("2hz", false) == doctest::Approx(2.0));
    CHECK(coldatom::cli::parse_omega("1khz", true) ==
          doctest::Approx(2.0 * 3.14159265358979 * 1e3));
    CHECK_THROWS(coldatom::cli::parse_omega("-5khz", false));
    CHECK_THROWS(coldatom::cli::parse_omega("khz", false));
    CHECK_THROWS(coldatom::cli::parse_omega("1.5qhz", false));

    CHECK(coldatom::cli::parse_temperature("0.05uk") == doctest::Approx(5e-8));
    CHECK(coldatom::cli::parse_temperature("25mK") == doctest::Approx(0.025));
    CHECK(coldatom::cli::parse_temperature("2k") == doctest::Approx(2.0));
    CHECK_THROWS(coldatom::cli::parse_temperature("0uk"));
}

TEST_CASE("solve prints the golden temperatures") {
    const auto r = run_cli("solve --omega 100khz");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find(" uK") != std::string::npos);
    const auto fields = result_fields(r.out);
    CHECK(std::abs(field_as_double(fields, "T_uK") - 0.433425) / 0.433425 < 1e-4);
    CHECK(std::abs(field_as_double(fields, "x_star") - 1.755481883519) < 1e-9);

    const auto ghz = run_cli("solve --omega 6.175ghz");
    REQUIRE(ghz.exit_code == 0);
    CHECK(ghz.out.find("mK") != std::string::npos);
    CHECK(std::abs(field_as_double(result_fields(ghz.out), "T_K") * 1e3 - 26.76) / 26.76 < 1e-3);
}

TEST_CASE("RESULT line field order is stable") {
    const auto r = run_cli("solve --omega 500khz");
    REQUIRE(r.exit_code == 0);
    std::vector<std::string> order;
    result_fields(r.out, &order);
    const std::vector<std::string> expected{"omega_hz", "x_star",    "T_K",
                                            "T_uK",     "residual", "iterations"};
    CHECK(order == expected);
}

TEST_CASE("argument validation exits with 2") {
    CHECK(run_cli("solve --omega -5khz").exit_code == 2);
    CHECK(run_cli("solve --omega banana").exit_code == 2);
    CHECK(run_cli("solve").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("thermal --x 0").exit_code == 2);
    CHECK(run_cli("thermal --x -1").exit_code == 2);
    CHECK(run_cli("curves --omega 100khz --points 1 --csv " + temp_dir() + "/c.csv").exit_code ==
          2);
    CHECK(run_cli("sweep --omega-min 100khz --omega-max 900khz --count 0 --csv " + temp_dir() +
                  "/s.csv")
              .exit_code == 2);
    CHECK(run_cli("sweep --omega-min 900khz --omega-max 100khz --csv " + temp_dir() + "/s.csv")
              .exit_code == 2);
    CHECK(run_cli("solve --omega 100khz --tolerance 0").exit_code == 2);
    CHECK(run_cli("curves --omega 100khz").exit_code == 2);  // no output requested
    CHECK(run_cli("evolve --points 16 --csv " + temp_dir() + "/e.csv").exit_code == 2);
}

TEST_CASE("unwritable output path exits with 4") {
    CHECK(run_cli("curves --omega 100khz --csv /nonexistent_dir/x.csv").exit_code == 4);
}

TEST_CASE("curves: csv column format, round-trip and bracketing") {
    const std::string csv_path = temp_dir() + "/fig1.csv";
    const auto r = run_cli("curves --omega 100khz --tmin 0.05uk --tmax 1uk --points 200 --csv " +
                           csv_path);
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(slurp(csv_path));
    REQUIRE(rows.size() == 201);
    CHECK(rows[0] == std::vector<std::string>{"T_K", "y1", "y2"});

    int sign_changes = 0;
    double lo = 0, hi = 0;
    for (std::size_t i = 2; i < rows.size(); ++i) {
        const double prev = std::stod(rows[i - 1][1]) - std::stod(rows[i - 1][2]);
        const double cur = std::stod(rows[i][1]) - std::stod(rows[i][2]);
        if ((prev < 0) != (cur < 0)) {
            ++sign_changes;
            lo = std::stod(rows[i - 1][0]);
            hi = std::stod(rows[i][0]);
        }
    }
    CHECK(sign_changes == 1);
    CHECK(lo < 0.433425e-6);
    CHECK(hi > 0.433425e-6);

    // every cell re-renders to the identical 9-significant-digit string
    for (std::size_t i = 1; i < rows.size(); ++i)
        for (const std::string& cell : rows[i])
            CHECK(coldatom::cli::csv_number(std::stod(cell)) == cell);
}

TEST_CASE("curves: svg output is deterministic and complete") {
    const std::string a = temp_dir() + "/fig_a.svg";
    const std::string b = temp_dir() + "/fig_b.svg";
    REQUIRE(run_cli("curves --omega 500khz --points 120 --svg " + a).exit_code == 0);
    REQUIRE(run_cli("curves --omega 500khz --points 120 --svg " + b).exit_code == 0);
    const std::string svg = slurp(a);
    CHECK(svg == slurp(b));
    CHECK(svg.find("<svg") != std::string::npos);
    std::size_t polylines = 0;
    for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos)
        ++polylines;
    CHECK(polylines == 2);
    CHECK(svg.find("<circle") != std::string::npos);  // crossing marker
}

TEST_CASE("sweep: csv, slope and the omega-invariant root") {
    const std::string csv_path = temp_dir() + "/sweep.csv";
    const std::string svg_path = temp_dir() + "/sweep.svg";
    const auto r = run_cli("sweep --omega-min 100khz --omega-max 900khz --count 9 --csv " +
                           csv_path + " --svg " + svg_path);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("slope") != std::string::npos);
    const auto fields = result_fields(r.out);
    CHECK(std::abs(field_as_double(fields, "slope_uK_per_kHz") - 4.334e-3) / 4.334e-3 < 1e-3);

    const auto rows = parse_csv(slurp(csv_path));
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == std::vector<std::string>{"omega_hz", "x_star", "T_K"});
    for (std::size_t i = 2; i < rows.size(); ++i) {
        CHECK(rows[i][1] == rows[1][1]);  // identical x_star at 9 digits
        CHECK(std::stod(rows[i][2]) > std::stod(rows[i - 1][2]));
    }
    CHECK(slurp(svg_path).find("<polyline") != std::string::npos);
}

TEST_CASE("expect: ground-state file reproduces the particular values") {
    const std::string path = write_coeffs("ground.txt", "0 0 0 0.7071067811865476 0\n");
    const auto r = run_cli("expect --coeffs " + path);
    REQUIRE(r.exit_code == 0);
    const auto fields = result_fields(r.out);
    for (const char* key : {"vx", "vy", "vz"})
        CHECK(std::abs(field_as_double(fields, key)) < 1e-14);
    for (const char* key : {"v2x", "v2y", "v2z", "pv2x"})
        CHECK(field_as_double(fields, key) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.err.empty());

    // damped at t = 1: envelope e^{-0.6}
    const auto damped = run_cli("expect --coeffs " + path + " --damping 0.1 --t 1");
    REQUIRE(damped.exit_code == 0);
    CHECK(field_as_double(result_fields(damped.out), "v2x") ==
          doctest::Approx(std::exp(-0.6)).epsilon(1e-12));
}

TEST_CASE("expect: non-normalized input warns and rescales") {
    const std::string path = write_coeffs("unnorm.txt", "0 0 0 1 0\n");
    const auto r = run_cli("expect --coeffs " + path);
    REQUIRE(r.exit_code == 0);
    CHECK(r.err.find("rescaling") != std::string::npos);
    CHECK(field_as_double(result_fields(r.out), "v2x") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("expect: malformed files exit with 2 and name the line") {
    const std::string bad = write_coeffs("bad.txt", "0 0 0 1 0\n0 -1 0 1 0\n");
    const auto r = run_cli("expect --coeffs " + bad);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("line 2") != std::string::npos);
    CHECK(run_cli("expect --coeffs " + temp_dir() + "/missing.txt").exit_code == 4);
}

TEST_CASE("evolve: exact decay exponent and csv columns") {
    const std::string csv_path = temp_dir() + "/evolve.csv";
    const auto r = run_cli("evolve --points 128 --steps-per-period 256 --damping 0.1 --csv " +
                           csv_path);
    REQUIRE(r.exit_code == 0);
    const auto fields = result_fields(r.out);
    CHECK(field_as_double(fields, "expected") == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(field_as_double(fields, "rel_error") < 1e-10);

    const auto rows = parse_csv(slurp(csv_path));
    CHECK(rows[0] == std::vector<std::string>{"t", "norm2", "v2_raw", "v2_normalized"});
    REQUIRE(rows.size() == 258);  // header + initial sample + 256 steps
    CHECK(std::stod(rows[1][2]) == doctest::Approx(1.0).epsilon(1e-4));

    const auto undamped = run_cli("evolve --points 128 --steps-per-period 256 --csv " + csv_path);
    REQUIRE(undamped.exit_code == 0);
    CHECK(std::abs(field_as_double(result_fields(undamped.out), "decay_exponent")) < 1e-12);
}

TEST_CASE("evolve: ground-state v2_raw column tracks the decay envelope") {
    const std::string csv_path = temp_dir() + "/envelope.csv";
    const auto r = run_cli("evolve --points 1024 --steps-per-period 1024 --damping 0.1 --csv " +
                           csv_path);
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(slurp(csv_path));
    REQUIRE(rows.size() == 1026);
    for (std::size_t i = 1; i < rows.size(); i += 128) {
        const double t = std::stod(rows[i][0]);
        const double v2 = std::stod(rows[i][2]);
        CHECK(std::abs(v2 - std::exp(-0.6 * t)) < 1e-5 * std::exp(-0.6 * t));
    }
}

TEST_CASE("evolve: two-mode coefficient state matches the analytic variance") {
    const double c = 1.0 / std::sqrt(2.0);
    std::ostringstream body;
    body << "0 0 0 " << c << " 0\n2 0 0 " << c << " 0\n";
    const std::string path = write_coeffs("two.txt", body.str());
    const std::string csv_path = temp_dir() + "/two.csv";
    const auto r = run_cli("evolve --initial coeffs:" + path +
                           " --points 512 --steps-per-period 1024 --periods 0.03125 --csv " +
                           csv_path);
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(slurp(csv_path));
    // v2_raw(0) = 3 - sqrt(2) for this state
    CHECK(std::stod(rows[1][2]) == doctest::Approx(3.0 - std::sqrt(2.0)).epsilon(1e-4));
}

TEST_CASE("thermal subcommand prints the series and factor") {
    const auto r = run_cli("thermal --x 1");
    REQUIRE(r.exit_code == 0);
    const auto fields = result_fields(r.out);
    CHECK(field_as_double(fields, "s0_closed") == doctest::Approx(3.587277309).epsilon(1e-9));
    CHECK(field_as_double(fields, "s0_partial") ==
          doctest::Approx(field_as_double(fields, "s0_closed")).epsilon(1e-12));
    CHECK(field_as_double(fields, "y1") == doctest::Approx(0.6939922356).epsilon(1e-9));
}

TEST_CASE("constant-set precedence: flag over config over environment") {
    const double default_T = field_as_double(result_fields(run_cli("solve --omega 100khz").out), "T_K");

    const auto env = run_cli("solve --omega 100khz", "COLDATOM_CONSTANTS=codata");
    const double env_T = field_as_double(result_fields(env.out), "T_K");
    CHECK(env_T / default_T == doctest::Approx(1.054571817 / 1.380649 * 1.38 / 1.05).epsilon(1e-12));

    const std::string cfg = temp_dir() + "/cfg.ini";
    {
        std::ofstream f(cfg);
        f << "constants = codata\n";
    }
    const auto from_cfg = run_cli("solve --omega 100khz --config " + cfg,
                                  "COLDATOM_CONSTANTS=truncated");
    CHECK(field_as_double(result_fields(from_cfg.out), "T_K") ==
          doctest::Approx(env_T).epsilon(1e-14));

    const auto flag_wins = run_cli("solve --omega 100khz --constants truncated --config " + cfg);
    CHECK(field_as_double(result_fields(flag_wins.out), "T_K") ==
          doctest::Approx(default_T).epsilon(1e-14));
}

TEST_CASE("angular flag multiplies by 2 pi") {
    const double base = field_as_double(result_fields(run_cli("solve --omega 100khz").out), "T_K");
    const auto r = run_cli("solve --omega 100khz --angular-2pi");
    CHECK(field_as_double(result_fields(r.out), "T_K") ==
          doctest::Approx(base * 2.0 * 3.141592653589793).epsilon(1e-12));
}

TEST_CASE("help exits cleanly") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("solve --help").exit_code == 0);
}

}  // TEST_SUITE
