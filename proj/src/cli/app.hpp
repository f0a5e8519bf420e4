#pragma once
// Command-line front end. Exit codes: 0 success, 2 argument/validation,
// 3 numerical non-convergence/instability, 4 I/O.

#include <string>

namespace coldatom::cli {

int run(int argc, const char* const* argv);

// "100khz" -> 1e5 (1/s); suffixes hz/khz/mhz/ghz, case-insensitive, no 2*pi
// unless angular_2pi is set. Throws std::invalid_argument.
double parse_omega(const std::string& text, bool angular_2pi);

// "0.433uk" -> 4.33e-7 (K); suffixes k/mk/uk/nk, case-insensitive.
double parse_temperature(const std::string& text);

// scientific notation, 9 significant digits (the CSV number format)
std::string csv_number(double v);

}  // namespace coldatom::cli
