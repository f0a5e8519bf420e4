#include "coldatom/expectation.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace coldatom::expect {

namespace {

using states::cdouble;

Mode3 shifted(Mode3 m, int axis, int delta) {
    switch (axis) {
        case 0: m.nx += delta; break;
        case 1: m.ny += delta; break;
        default: m.nz += delta; break;
    }
    return m;
}

int component(const Mode3& m, int axis) {
    switch (axis) {
        case 0: return m.nx;
        case 1: return m.ny;
        default: return m.nz;
    }
}

void check_cutoff(const Superposition& s) {
    for (const auto& [mode, c] : s.coeffs) {
        if (mode.nx < 0 || mode.ny < 0 || mode.nz < 0 || mode.nx > s.cutoff ||
            mode.ny > s.cutoff || mode.nz > s.cutoff)
            throw std::out_of_range("superposition references a mode beyond the basis cutoff");
    }
}

void check_residue(double residue, double scale, const char* what) {
    if (residue > 1e-12 * scale)
        throw std::logic_error(std::string(what) +
                               ": imaginary residue exceeds 1e-12 of the term magnitude");
}

// sum over the state of the one-step cross terms for one axis:
//   sqrt(n_d/2) C_n conj(C_{n-e_d}) e^{-iwt} - sqrt((n_d+1)/2) C_n conj(C_{n+e_d}) e^{+iwt}
cdouble v_mean_bracket(const Superposition& s, int axis, const cdouble& down_phase,
                       const cdouble& up_phase, double& term_scale) {
    cdouble sum = 0.0;
    for (const auto& [mode, c] : s.coeffs) {
        const int nd = component(mode, axis);
        if (nd >= 1) {
            if (auto it = s.coeffs.find(shifted(mode, axis, -1)); it != s.coeffs.end()) {
                const cdouble term =
                    std::sqrt(nd / 2.0) * c * std::conj(it->second) * down_phase;
                sum += term;
                term_scale += std::abs(term);
            }
        }
        if (auto it = s.coeffs.find(shifted(mode, axis, +1)); it != s.coeffs.end()) {
            const cdouble term =
                std::sqrt((nd + 1) / 2.0) * c * std::conj(it->second) * up_phase;
            sum -= term;
            term_scale += std::abs(term);
        }
    }
    return sum;
}

// sum of (2 n_d + 1)|C|^2 minus the two-step cross terms for one axis
cdouble v2_bracket(const Superposition& s, int axis, const cdouble& down_phase,
                   const cdouble& up_phase, double& term_scale, bool include_cross) {
    cdouble sum = 0.0;
    for (const auto& [mode, c] : s.coeffs) {
        const int nd = component(mode, axis);
        const double diag = (2.0 * nd + 1.0) * std::norm(c);
        sum += diag;
        term_scale += diag;
        if (!include_cross) continue;
        if (nd >= 2) {
            if (auto it = s.coeffs.find(shifted(mode, axis, -2)); it != s.coeffs.end()) {
                const cdouble term = std::sqrt(double(nd - 1) * nd) * c *
                                     std::conj(it->second) * down_phase;
                sum -= term;
                term_scale += std::abs(term);
            }
        }
        if (auto it = s.coeffs.find(shifted(mode, axis, +2)); it != s.coeffs.end()) {
            const cdouble term = std::sqrt(double(nd + 1) * (nd + 2)) * c *
                                 std::conj(it->second) * up_phase;
            sum -= term;
            term_scale += std::abs(term);
        }
    }
    return sum;
}

}  // namespace

std::array<double, 3> general_v_mean(const Superposition& s, const PhysParams& p, double t) {
    if (t < 0) throw std::invalid_argument("time must be non-negative");
    check_cutoff(s);
    const double alpha = p.axis().alpha;
    const double envelope = std::exp(-6.0 * p.damping * t / p.mass);
    const double prefactor = 2.0 * p.hbar * alpha / p.mass * envelope;
    const cdouble down_phase = std::polar(1.0, -p.omega * t);
    const cdouble up_phase = std::conj(down_phase);
    std::array<double, 3> v{};
    for (int axis = 0; axis < 3; ++axis) {
        double term_scale = 0.0;
        const cdouble bracket = v_mean_bracket(s, axis, down_phase, up_phase, term_scale);
        // (1/i) * bracket = Im(bracket) - i Re(bracket)
        check_residue(std::abs(bracket.real()), term_scale, "general_v_mean");
        v[axis] = prefactor * bracket.imag();
    }
    return v;
}

std::array<double, 3> general_v2(const Superposition& s, const PhysParams& p, double t) {
    if (t < 0) throw std::invalid_argument("time must be non-negative");
    check_cutoff(s);
    const double envelope = std::exp(-6.0 * p.damping * t / p.mass);
    const double prefactor = p.hbar * p.omega / p.mass * envelope;
    const cdouble down_phase = std::polar(1.0, -2.0 * p.omega * t);
    const cdouble up_phase = std::conj(down_phase);
    std::array<double, 3> v2{};
    for (int axis = 0; axis < 3; ++axis) {
        double term_scale = 0.0;
        const cdouble bracket = v2_bracket(s, axis, down_phase, up_phase, term_scale, true);
        check_residue(std::abs(bracket.imag()), term_scale, "general_v2");
        v2[axis] = prefactor * bracket.real();
    }
    return v2;
}

std::array<double, 3> period_averaged_v2(const Superposition& s, const PhysParams& p,
                                         double t_envelope) {
    if (t_envelope < 0) throw std::invalid_argument("time must be non-negative");
    check_cutoff(s);
    const double envelope = std::exp(-6.0 * p.damping * t_envelope / p.mass);
    const double prefactor = p.hbar * p.omega / p.mass * envelope;
    std::array<double, 3> v2{};
    for (int axis = 0; axis < 3; ++axis) {
        double term_scale = 0.0;
        const cdouble bracket = v2_bracket(s, axis, 0.0, 0.0, term_scale, false);
        v2[axis] = prefactor * bracket.real();
    }
    return v2;
}

std::array<double, 3> particular_v_mean(const PhysParams& p, Mode3 mode, double t) {
    return general_v_mean(Superposition::single_mode(p, mode), p, t);
}

std::array<double, 3> particular_v2(const PhysParams& p, Mode3 mode, double t) {
    return general_v2(Superposition::single_mode(p, mode), p, t);
}

VelocityMoments moments(const Superposition& s, const PhysParams& p, double t) {
    return {general_v_mean(s, p, t), general_v2(s, p, t), t};
}

}  // namespace coldatom::expect
