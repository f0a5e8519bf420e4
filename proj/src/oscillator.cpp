#include "coldatom/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "coldatom/kernels.hpp"

namespace coldatom::osc {

namespace {

constexpr double kPiQuarterInv = 0.7511255444649425;  // pi^(-1/4)

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

OscParams1D OscParams1D::make(double mass, double omega, double hbar) {
    require(mass > 0 && std::isfinite(mass), "oscillator mass must be positive");
    require(omega > 0 && std::isfinite(omega), "oscillator omega must be positive");
    require(hbar > 0 && std::isfinite(hbar), "hbar must be positive");
    return {mass, omega, hbar, std::sqrt(mass * omega / hbar)};
}

Amplitude eigenfunction_checked(const OscParams1D& p, int n, double x, double window) {
    require(n >= 0, "basis index must be non-negative");
    require(std::isfinite(x), "evaluation point must be finite");
    const double u = p.alpha * x;
    if (std::abs(u) > window) return {0.0, true};
    // psi_0 = sqrt(alpha) * pi^(-1/4) * exp(-u^2/2), then
    // psi_{k+1} = u*sqrt(2/(k+1))*psi_k - sqrt(k/(k+1))*psi_{k-1}.
    double hk = std::sqrt(p.alpha) * kPiQuarterInv * std::exp(-0.5 * u * u);
    double hkm1 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double next =
            u * std::sqrt(2.0 / (k + 1)) * hk - std::sqrt(double(k) / (k + 1)) * hkm1;
        hkm1 = hk;
        hk = next;
    }
    return {hk, false};
}

double eigenfunction(const OscParams1D& p, int n, double x) {
    return eigenfunction_checked(p, n, x).value;
}

void eigenfunction_batch(const OscParams1D& p, int n, std::span<const double> x,
                         std::span<double> out, double window) {
    require(n >= 0, "basis index must be non-negative");
    require(x.size() == out.size(), "batch size mismatch");
    const std::size_t m = x.size();
    std::vector<double> u(m), hk(m), hkm1(m, 0.0), next(m);
    const double norm0 = std::sqrt(p.alpha) * kPiQuarterInv;
    for (std::size_t i = 0; i < m; ++i) {
        u[i] = p.alpha * x[i];
        hk[i] = std::abs(u[i]) > window ? 0.0 : norm0 * std::exp(-0.5 * u[i] * u[i]);
    }
    for (int k = 0; k < n; ++k) {
        kernels::hermite_step(u, std::sqrt(2.0 / (k + 1)), std::sqrt(double(k) / (k + 1)), hk,
                              hkm1, next);
        std::swap(hkm1, hk);
        std::swap(hk, next);
    }
    std::copy(hk.begin(), hk.end(), out.begin());
}

std::vector<LadderTerm> ladder_derivative(int n) {
    require(n >= 0, "basis index must be non-negative");
    std::vector<LadderTerm> terms;
    if (n >= 1) terms.push_back({n - 1, std::sqrt(n / 2.0)});
    terms.push_back({n + 1, -std::sqrt((n + 1) / 2.0)});
    return terms;
}

std::vector<LadderTerm> second_derivative_action(int n) {
    require(n >= 0, "basis index must be non-negative");
    std::vector<LadderTerm> terms;
    if (n >= 2) terms.push_back({n - 2, 0.5 * std::sqrt(double(n) * (n - 1))});
    terms.push_back({n, -0.5 * (2.0 * n + 1)});
    terms.push_back({n + 2, 0.5 * std::sqrt(double(n + 1) * (n + 2))});
    return terms;
}

GaussHermiteRule gauss_hermite(int order) {
    require(order >= 1, "quadrature order must be >= 1");
    constexpr double kEps = 3.0e-14;
    constexpr int kMaxIt = 16;
    GaussHermiteRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int half = (order + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < half; ++i) {
        // root guesses, largest first
        if (i == 0) {
            z = std::sqrt(2.0 * order + 1) - 1.85575 * std::pow(2.0 * order + 1, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(double(order), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * rule.nodes[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * rule.nodes[1];
        } else {
            z = 2.0 * z - rule.nodes[i - 2];
        }
        double pp = 0.0;
        for (int it = 0; it < kMaxIt; ++it) {
            double p1 = kPiQuarterInv;
            double p2 = 0.0;
            for (int j = 1; j <= order; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * order) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= kEps) break;
        }
        rule.nodes[i] = z;
        rule.nodes[order - 1 - i] = -z;
        rule.weights[i] = 2.0 / (pp * pp);
        rule.weights[order - 1 - i] = rule.weights[i];
    }
    std::reverse(rule.nodes.begin(), rule.nodes.end());
    std::reverse(rule.weights.begin(), rule.weights.end());
    return rule;
}

namespace {

// Gaussian-free normalized Hermite rows q_k(u) = psi_k(u) * exp(u^2/2) / sqrt(alpha)
// together with first and second u-derivatives, propagated through the same
// recurrence (forward Taylor), evaluated on the quadrature nodes.
struct PolyRows {
    std::vector<double> value, d1, d2;
};

PolyRows hermite_poly_rows(std::span<const double> u, int level) {
    const std::size_t m = u.size();
    std::vector<double> hk(m, kPiQuarterInv), hkm1(m, 0.0);
    std::vector<double> dk(m, 0.0), dkm1(m, 0.0);
    std::vector<double> d2k(m, 0.0), d2km1(m, 0.0);
    std::vector<double> tmp(m);
    for (int k = 0; k < level; ++k) {
        const double c1 = std::sqrt(2.0 / (k + 1));
        const double c2 = std::sqrt(double(k) / (k + 1));
        kernels::hermite_step_d2(u, c1, c2, dk, d2k, d2km1, tmp);
        std::swap(d2km1, d2k);
        std::swap(d2k, tmp);
        kernels::hermite_step_d1(u, c1, c2, hk, dk, dkm1, tmp);
        std::swap(dkm1, dk);
        std::swap(dk, tmp);
        kernels::hermite_step(u, c1, c2, hk, hkm1, tmp);
        std::swap(hkm1, hk);
        std::swap(hk, tmp);
    }
    return {std::move(hk), std::move(dk), std::move(d2k)};
}

// Dimensionless <q_m | op | q_n> under the exp(-u^2) weight; factors of
// alpha are applied by the caller.
double quadrature_dimensionless(int order, int m, OperatorKind op, int n) {
    const GaussHermiteRule rule = gauss_hermite(order);
    const std::span<const double> u(rule.nodes);
    const PolyRows bra = hermite_poly_rows(u, m);
    const PolyRows ket = hermite_poly_rows(u, n);
    std::vector<double> integrand(u.size());
    switch (op) {
        case OperatorKind::identity:
            integrand = ket.value;
            break;
        case OperatorKind::x:
            for (std::size_t i = 0; i < u.size(); ++i) integrand[i] = u[i] * ket.value[i];
            break;
        case OperatorKind::x2:
            for (std::size_t i = 0; i < u.size(); ++i) integrand[i] = u[i] * u[i] * ket.value[i];
            break;
        case OperatorKind::d_dx:
            // (q e^{-u^2/2})' * e^{u^2/2} = q' - u q
            for (std::size_t i = 0; i < u.size(); ++i)
                integrand[i] = ket.d1[i] - u[i] * ket.value[i];
            break;
        case OperatorKind::d2_dx2:
            // (q e^{-u^2/2})'' * e^{u^2/2} = q'' - 2u q' + (u^2 - 1) q
            for (std::size_t i = 0; i < u.size(); ++i)
                integrand[i] =
                    ket.d2[i] - 2.0 * u[i] * ket.d1[i] + (u[i] * u[i] - 1.0) * ket.value[i];
            break;
    }
    return kernels::weighted_dot(rule.weights, bra.value, integrand);
}

}  // namespace

double quadrature_matrix_element(const OscParams1D& p, int m, OperatorKind op, int n) {
    require(m >= 0 && n >= 0, "basis indices must be non-negative");
    const int order0 = std::max(m + n + 16, 24);
    const double r1 = quadrature_dimensionless(order0, m, op, n);
    const double r2 = quadrature_dimensionless(2 * order0, m, op, n);
    if (std::abs(r1 - r2) > 1e-10 * std::max(1.0, std::abs(r2)))
        throw QuadratureError("Gauss-Hermite quadrature did not converge for (" +
                              std::to_string(m) + "," + std::to_string(n) + ")");
    switch (op) {
        case OperatorKind::identity: return r2;
        case OperatorKind::x: return r2 / p.alpha;
        case OperatorKind::x2: return r2 / (p.alpha * p.alpha);
        case OperatorKind::d_dx: return r2 * p.alpha;
        case OperatorKind::d2_dx2: return r2 * p.alpha * p.alpha;
    }
    return r2;
}

}  // namespace coldatom::osc
