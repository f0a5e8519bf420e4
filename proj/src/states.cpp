#include "coldatom/states.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>

namespace coldatom::states {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

PhysParams PhysParams::make(double hbar, double k_B, double mass, double omega, double damping) {
    require(hbar > 0 && std::isfinite(hbar), "hbar must be positive");
    require(k_B > 0 && std::isfinite(k_B), "k_B must be positive");
    require(mass > 0 && std::isfinite(mass), "mass must be positive");
    require(omega > 0 && std::isfinite(omega), "omega must be positive");
    require(damping >= 0 && std::isfinite(damping), "damping must be non-negative");
    return {hbar, k_B, mass, omega, damping, mass * omega * omega};
}

PhysParams PhysParams::natural(double damping) { return make(1.0, 1.0, 1.0, 1.0, damping); }

ConstantSet truncated_constants() { return {1.05e-34, 1.38e-23}; }
ConstantSet codata_constants() { return {1.054571817e-34, 1.380649e-23}; }

long long degeneracy(int shell) {
    require(shell >= 0, "shell number must be non-negative");
    return static_cast<long long>(shell + 1) * (shell + 2) / 2;
}

std::vector<Mode3> enumerate_shell(int shell) {
    require(shell >= 0, "shell number must be non-negative");
    std::vector<Mode3> modes;
    modes.reserve(static_cast<std::size_t>(degeneracy(shell)));
    for (int nx = 0; nx <= shell; ++nx)
        for (int ny = 0; ny <= shell - nx; ++ny) modes.push_back({nx, ny, shell - nx - ny});
    return modes;
}

long long shell_vx2_weight(int shell) {
    long long sum = 0;
    for (const Mode3& m : enumerate_shell(shell)) sum += 2LL * m.nx + 1;
    return sum;
}

long long shell_vx2_weight_closed(int shell) {
    require(shell >= 0, "shell number must be non-negative");
    return static_cast<long long>(shell + 1) * (shell + 2) * (2LL * shell + 3) / 6;
}

ComplexEnergy complex_energy(const PhysParams& p, int shell) {
    require(shell >= 0, "shell number must be non-negative");
    return {(shell + 1.5) * p.hbar * p.omega, -3.0 * p.hbar * p.damping / p.mass};
}

Superposition Superposition::single_mode(const PhysParams& p, Mode3 mode, cdouble c) {
    return from_coefficients(p, {{mode, c}});
}

Superposition Superposition::from_coefficients(const PhysParams& p, std::map<Mode3, cdouble> coeffs,
                                               int cutoff) {
    for (const auto& [mode, c] : coeffs) {
        require(mode.nx >= 0 && mode.ny >= 0 && mode.nz >= 0, "mode indices must be non-negative");
        require(mode.nx <= cutoff && mode.ny <= cutoff && mode.nz <= cutoff,
                "mode index beyond basis cutoff");
        require(std::isfinite(c.real()) && std::isfinite(c.imag()),
                "coefficient must be finite");
    }
    Superposition s;
    s.coeffs = std::move(coeffs);
    s.damping = p.damping;
    s.mass = p.mass;
    s.cutoff = cutoff;
    return s;
}

double Superposition::sum_abs2() const {
    double sum = 0.0;
    for (const auto& [mode, c] : coeffs) sum += std::norm(c);
    return sum;
}

bool Superposition::unit_norm(double tol) const {
    return std::abs(2.0 * sum_abs2() - 1.0) <= tol;
}

void Superposition::rescale_to_unit_norm() {
    const double sum = sum_abs2();
    require(sum > 0, "cannot normalize an empty superposition");
    const double scale = 1.0 / std::sqrt(2.0 * sum);
    for (auto& [mode, c] : coeffs) c *= scale;
}

cdouble particular_solution_value(const PhysParams& p, Mode3 mode,
                                  const std::array<double, 3>& r, double t) {
    require(t >= 0, "time must be non-negative");
    const osc::OscParams1D axis = p.axis();
    const double product = osc::eigenfunction(axis, mode.nx, r[0]) *
                           osc::eigenfunction(axis, mode.ny, r[1]) *
                           osc::eigenfunction(axis, mode.nz, r[2]);
    const double e1 = complex_energy(p, mode.shell()).real_part;
    const cdouble phase = std::polar(1.0, -e1 * t / p.hbar);
    const double decay = std::exp(-3.0 * p.damping * t / p.mass);
    return cdouble(1.0, 1.0) * product * phase * decay;
}

double squared_norm(const Superposition& s, double t) {
    require(t >= 0, "time must be non-negative");
    return 2.0 * s.sum_abs2() * std::exp(-6.0 * s.damping * t / s.mass);
}

namespace {

// 6th-order second derivative, ghost values outside the grid taken as zero
// (amplitudes there are below 1e-20 of the peak for the default box).
std::vector<double> fd6_second_derivative(const std::vector<double>& f, double h) {
    const int n = static_cast<int>(f.size());
    std::vector<double> out(f.size());
    const double inv = 1.0 / (180.0 * h * h);
    auto at = [&](int i) { return (i >= 0 && i < n) ? f[i] : 0.0; };
    for (int i = 0; i < n; ++i) {
        out[i] = (2.0 * (at(i - 3) + at(i + 3)) - 27.0 * (at(i - 2) + at(i + 2)) +
                  270.0 * (at(i - 1) + at(i + 1)) - 490.0 * f[i]) *
                 inv;
    }
    return out;
}

struct AxisRows {
    std::vector<double> value;  // psi_n at the grid points
    std::vector<double> op;     // (T + V_axis) psi_n with T = -hbar^2/2m d^2
    double max_abs = 0.0;
};

AxisRows axis_rows(const PhysParams& p, int n, int points, double half_width) {
    const osc::OscParams1D axis = p.axis();
    const double h = 2.0 * half_width / (points + 1);
    std::vector<double> x(points);
    for (int i = 0; i < points; ++i) x[i] = -half_width + (i + 1) * h;
    AxisRows rows;
    rows.value.resize(points);
    osc::eigenfunction_batch(axis, n, x, rows.value);
    const std::vector<double> d2 = fd6_second_derivative(rows.value, h);
    rows.op.resize(points);
    const double kinetic = -p.hbar * p.hbar / (2.0 * p.mass);
    for (int i = 0; i < points; ++i) {
        rows.op[i] = kinetic * d2[i] + 0.5 * p.stiffness * x[i] * x[i] * rows.value[i];
        rows.max_abs = std::max(rows.max_abs, std::abs(rows.value[i]));
    }
    return rows;
}

// max-norm residuals of the two split equations over the product grid
std::pair<double, double> residual_pass(const PhysParams& p, Mode3 mode, int points,
                                        double half_width, double coupling) {
    const double e1 = complex_energy(p, mode.shell()).real_part;
    AxisRows ax = axis_rows(p, mode.nx, points, half_width);
    AxisRows ay = axis_rows(p, mode.ny, points, half_width);
    AxisRows az = axis_rows(p, mode.nz, points, half_width);
    // fold -E1 into the x rows so the residual is P*b*c + a*Q*c + a*b*R
    for (int i = 0; i < points; ++i) ax.op[i] -= e1 * ax.value[i];
    double max_sym = 0.0, max_antisym = 0.0;
    for (int i = 0; i < points; ++i) {
        for (int j = 0; j < points; ++j) {
            const double pb = ax.op[i] * ay.value[j] + ax.value[i] * ay.op[j];
            const double ab = ax.value[i] * ay.value[j];
            const double cab = coupling * ab;
            for (int k = 0; k < points; ++k) {
                const double base = pb * az.value[k] + ab * az.op[k];
                max_sym = std::max(max_sym, std::abs(base + cab * az.value[k]));
                max_antisym = std::max(max_antisym, std::abs(base - cab * az.value[k]));
            }
        }
    }
    const double scale = std::abs(e1) * ax.max_abs * ay.max_abs * az.max_abs;
    return {max_sym / scale, max_antisym / scale};
}

}  // namespace

ResidualReport eigen_residuals(const PhysParams& p, Mode3 mode, const Grid3Spec& grid) {
    require(mode.nx >= 0 && mode.ny >= 0 && mode.nz >= 0, "mode indices must be non-negative");
    require(grid.points_per_axis >= 8, "grid too small");
    require(grid.half_width_losc > 0, "grid half-width must be positive");
    const double half_width = grid.half_width_losc / p.axis().alpha;
    const ComplexEnergy e = complex_energy(p, mode.shell());
    const double coupling = e.imag_part + 3.0 * p.hbar * p.damping / p.mass;

    ResidualReport report;
    report.coupling_coefficient = coupling;
    const auto [sym, antisym] = residual_pass(p, mode, grid.points_per_axis, half_width, coupling);
    report.rel_residual_sym = sym;
    report.rel_residual_antisym = antisym;
    const auto [sym_half, antisym_half] =
        residual_pass(p, mode, 2 * grid.points_per_axis + 1, half_width, coupling);
    report.rel_residual_half = sym_half;
    // a resolved grid gains ~2^6 per halving; anything below 2^3 means the
    // coarse grid is not yet in the convergent regime
    report.under_resolved = sym > 1e-11 && sym_half > sym / 8.0;
    return report;
}

Superposition load_coefficients(std::istream& in, const PhysParams& p, int cutoff) {
    std::map<Mode3, cdouble> coeffs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        long long nx, ny, nz;
        double re, im;
        if (!(fields >> nx)) continue;  // blank or comment-only line
        if (!(fields >> ny >> nz >> re >> im))
            throw CoeffParseError(line_no, "expected 'nx ny nz re im' on line " +
                                               std::to_string(line_no));
        std::string extra;
        if (fields >> extra)
            throw CoeffParseError(line_no,
                                  "trailing tokens on line " + std::to_string(line_no));
        if (nx < 0 || ny < 0 || nz < 0)
            throw CoeffParseError(line_no,
                                  "negative mode index on line " + std::to_string(line_no));
        if (nx > cutoff || ny > cutoff || nz > cutoff)
            throw CoeffParseError(line_no, "mode index beyond basis cutoff " +
                                               std::to_string(cutoff) + " on line " +
                                               std::to_string(line_no));
        if (!std::isfinite(re) || !std::isfinite(im))
            throw CoeffParseError(line_no,
                                  "non-finite coefficient on line " + std::to_string(line_no));
        coeffs[{static_cast<int>(nx), static_cast<int>(ny), static_cast<int>(nz)}] +=
            cdouble(re, im);
    }
    if (coeffs.empty())
        throw CoeffParseError(line_no, "coefficient file contains no entries");
    return Superposition::from_coefficients(p, std::move(coeffs), cutoff);
}

}  // namespace coldatom::states
