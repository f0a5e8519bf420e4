#pragma once
// 3D oscillator product states: shell enumeration and degeneracy, complex
// energies of the damped eigenpairs, superpositions carrying the fixed (1+i)
// amplitude convention with exponential decay, and a finite-difference
// residual oracle for the split real/imaginary eigenvalue equations.

#include <array>
#include <compare>
#include <complex>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <vector>

#include "coldatom/oscillator.hpp"

namespace coldatom::states {

using cdouble = std::complex<double>;

struct PhysParams {
    double hbar;       // J s
    double k_B;        // J/K
    double mass;       // kg
    double omega;      // 1/s
    double damping;    // k, kg/s
    double stiffness;  // kappa = mass*omega^2, kg/s^2

    static PhysParams make(double hbar, double k_B, double mass, double omega, double damping);
    static PhysParams natural(double damping = 0.0);  // hbar = k_B = m = omega = 1

    osc::OscParams1D axis() const { return osc::OscParams1D::make(mass, omega, hbar); }
};

struct ConstantSet {
    double hbar, k_B;
};
// Truncated constants used throughout the temperature predictions.
ConstantSet truncated_constants();   // 1.05e-34, 1.38e-23
ConstantSet codata_constants();  // 1.054571817e-34, 1.380649e-23

struct Mode3 {
    int nx = 0, ny = 0, nz = 0;
    int shell() const { return nx + ny + nz; }
    auto operator<=>(const Mode3&) const = default;
};

// f(N) = (N+1)(N+2)/2
long long degeneracy(int shell);

// all (nx,ny,nz) with nx+ny+nz == shell, lexicographic (nx major)
std::vector<Mode3> enumerate_shell(int shell);

// sum over the shell of (2*nx + 1), by enumeration (exact integers)
long long shell_vx2_weight(int shell);
// closed form (N+1)(N+2)(2N+3)/6, kept separate as a cross-check
long long shell_vx2_weight_closed(int shell);

struct ComplexEnergy {
    double real_part;  // (N + 3/2) hbar omega
    double imag_part;  // -3 hbar k / m
};
ComplexEnergy complex_energy(const PhysParams& p, int shell);

// Superposition of product modes; every basis function carries the fixed
// (1+i) factor, so the squared norm is 2*sum|C|^2 at t=0. Coefficients are
// stored as given: the unit-norm convention 2*sum|C|^2 = 1 is checked where
// a contract requires it, never silently imposed (a single mode with C = 1
// is the particular solution).
struct Superposition {
    std::map<Mode3, cdouble> coeffs;
    double damping = 0.0;
    double mass = 1.0;
    int cutoff = osc::kDefaultBasisCutoff;  // per-axis index bound

    static Superposition single_mode(const PhysParams& p, Mode3 mode, cdouble c = 1.0);
    static Superposition from_coefficients(const PhysParams& p,
                                           std::map<Mode3, cdouble> coeffs,
                                           int cutoff = osc::kDefaultBasisCutoff);

    double sum_abs2() const;
    bool unit_norm(double tol) const;  // |2*sum|C|^2 - 1| <= tol
    void rescale_to_unit_norm();
};

// (1+i) psi_nx(x) psi_ny(y) psi_nz(z) exp(-i E1 t / hbar) exp(-3 k t / m)
cdouble particular_solution_value(const PhysParams& p, Mode3 mode,
                                  const std::array<double, 3>& r, double t);

// 2 * sum|C|^2 * exp(-6 k t / m)
double squared_norm(const Superposition& s, double t);

struct Grid3Spec {
    double half_width_losc = 10.0;  // in oscillator lengths 1/alpha
    int points_per_axis = 192;
};

struct ResidualReport {
    double rel_residual_sym;      // equation for the real part, R
    double rel_residual_antisym;  // equation for the imaginary part, S
    double coupling_coefficient;  // E2 + 3 hbar k / m, identically zero
    double rel_residual_half;     // sym residual with the spacing halved
    bool under_resolved;
};

// Evaluates both split equations on a 3D grid with R = S = product
// eigenfunction and E2 = -3 hbar k / m, using a 6th-order finite-difference
// Laplacian. Residuals are max-norm, relative to max|E1 * R|. The grid is
// flagged under-resolved when halving the spacing fails to shrink the
// residual (no convergent regime).
ResidualReport eigen_residuals(const PhysParams& p, Mode3 mode, const Grid3Spec& grid = {});

struct CoeffParseError : std::runtime_error {
    int line;
    CoeffParseError(int line_, const std::string& what)
        : std::runtime_error(what), line(line_) {}
};

// Coefficient file: one entry per line, "nx ny nz re(C) im(C)", whitespace
// separated, '#' starts a comment. Repeated modes accumulate.
Superposition load_coefficients(std::istream& in, const PhysParams& p,
                                int cutoff = osc::kDefaultBasisCutoff);

}  // namespace coldatom::states
