#pragma once
// 1D quantum harmonic oscillator basis: normalized eigenfunctions evaluated
// through the stable three-term recurrence, the ladder actions of d/dx and
// d^2/dx^2, and a Gauss-Hermite quadrature oracle that verifies every matrix
// element without touching the ladder algebra.

#include <span>
#include <stdexcept>
#include <vector>

namespace coldatom::osc {

inline constexpr int kDefaultBasisCutoff = 64;

// |alpha*x| beyond this underflows psi_n to exactly zero in double precision.
inline constexpr double kEvalWindow = 38.0;

struct OscParams1D {
    double mass;   // kg
    double omega;  // 1/s
    double hbar;   // J s
    double alpha;  // sqrt(mass*omega/hbar), 1/m

    static OscParams1D make(double mass, double omega, double hbar);
};

struct Amplitude {
    double value;
    bool underflow;
};

// Normalized psi_n(x); returns 0 with the underflow flag set (never NaN)
// outside the evaluation window.
Amplitude eigenfunction_checked(const OscParams1D& p, int n, double x,
                                double window = kEvalWindow);
double eigenfunction(const OscParams1D& p, int n, double x);

// psi_n at a batch of points; the level recurrence runs across the whole
// batch through the kernels backend. Points beyond the window map to 0.
void eigenfunction_batch(const OscParams1D& p, int n, std::span<const double> x,
                         std::span<double> out, double window = kEvalWindow);

struct LadderTerm {
    int n;         // target index
    double coeff;  // units of alpha (first derivative) or alpha^2 (second)
};

// d/dx psi_n = alpha * [ sqrt(n/2) psi_{n-1} - sqrt((n+1)/2) psi_{n+1} ];
// the n-1 term is omitted at n = 0.
std::vector<LadderTerm> ladder_derivative(int n);

// d2/dx2 psi_n = alpha^2 * [ sqrt(n(n-1))/2 psi_{n-2} - (2n+1)/2 psi_n
//                            + sqrt((n+1)(n+2))/2 psi_{n+2} ]
std::vector<LadderTerm> second_derivative_action(int n);

enum class OperatorKind { identity, d_dx, d2_dx2, x, x2 };

struct GaussHermiteRule {
    std::vector<double> nodes;    // ascending
    std::vector<double> weights;  // for weight exp(-u^2)
};
GaussHermiteRule gauss_hermite(int order);

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// <psi_m | Op | psi_n> by Gauss-Hermite quadrature. Derivatives of the basis
// functions are obtained by differentiating the recurrence itself (forward
// Taylor propagation), so the result is independent of the ladder algebra.
// The order is doubled once as a stability check; a disagreement beyond
// 1e-10 on the dimensionless integral raises QuadratureError.
double quadrature_matrix_element(const OscParams1D& p, int m, OperatorKind op, int n);

}  // namespace coldatom::osc
