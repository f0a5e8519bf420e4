#pragma once
// Velocity-moment expectation values of the damped oscillator solutions:
// <v> and <v^2> per axis for particular solutions and for arbitrary finite
// superpositions (including the oscillatory cross terms), plus the
// period-averaged <v^2>. All values follow the (1+i) amplitude convention,
// so a single mode with C = 1 reproduces the particular solution exactly.

#include <array>

#include "coldatom/states.hpp"

namespace coldatom::expect {

using states::Mode3;
using states::PhysParams;
using states::Superposition;

struct VelocityMoments {
    std::array<double, 3> mean_v;   // m/s
    std::array<double, 3> mean_v2;  // m^2/s^2
    double t;
};

// Single damped eigenstate. Computed through the ladder contraction of the
// general-solution machinery (the orthogonality cancellation is exercised,
// zero is not hard-coded).
std::array<double, 3> particular_v_mean(const PhysParams& p, Mode3 mode, double t);
// component d: exp(-6kt/m) * (hbar*omega/m) * (2 n_d + 1)
std::array<double, 3> particular_v2(const PhysParams& p, Mode3 mode, double t);

// Arbitrary superposition. Components are real by the conjugate-pair
// structure; an imaginary residue above 1e-12 of the term magnitude raises
// std::logic_error. States referencing modes beyond the cutoff are rejected.
std::array<double, 3> general_v_mean(const Superposition& s, const PhysParams& p, double t);
std::array<double, 3> general_v2(const Superposition& s, const PhysParams& p, double t);

// general_v2 with the oscillatory cross terms dropped; the decay envelope is
// frozen at t_envelope (the average itself is over one period).
std::array<double, 3> period_averaged_v2(const Superposition& s, const PhysParams& p,
                                         double t_envelope);

VelocityMoments moments(const Superposition& s, const PhysParams& p, double t);

}  // namespace coldatom::expect
