#pragma once
// Data-parallel arithmetic kernels with runtime backend selection.
//
// Every kernel has a scalar reference implementation; on x86-64 builds an
// AVX2+FMA variant is compiled alongside and picked at startup when the CPU
// supports it. The environment variable COLDATOM_KERNELS=scalar|avx2 forces
// a backend, and set_backend() switches at runtime (used by the equivalence
// tests). Backends may differ in summation order, so results agree to
// rounding, not bit-exactly.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace coldatom::kernels {

using cdouble = std::complex<double>;

enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);
Backend active_backend();
std::vector<Backend> available_backends();
void set_backend(Backend b);  // throws std::invalid_argument if unavailable

// sum_i w[i] * a[i] * b[i]
double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b);

// sum_i |z[i]|^2
double cnorm2(std::span<const cdouble> z);

// sum_i conj(a[i]) * b[i]
cdouble cdot(std::span<const cdouble> a, std::span<const cdouble> b);

// z[i] *= s
void cscale(std::span<cdouble> z, cdouble s);

// y[i] = diag[i]*x[i] + off1*(x[i-1] + x[i+1]) + off2*(x[i-2] + x[i+2])
// with out-of-range neighbours taken as zero (Dirichlet boundary).
void penta_apply(std::span<const cdouble> diag, cdouble off1, cdouble off2,
                 std::span<const cdouble> x, std::span<cdouble> y);

// Recurrence steps for evaluating oscillator eigenfunctions (and their
// u-derivatives) on a batch of points u[i]:
//   hermite_step:    out[i] = c1*u[i]*h[i]              - c2*g[i]
//   hermite_step_d1: out[i] = c1*(h[i] + u[i]*dh[i])    - c2*dg[i]
//   hermite_step_d2: out[i] = c1*(2*dh[i] + u[i]*d2h[i]) - c2*d2g[i]
void hermite_step(std::span<const double> u, double c1, double c2,
                  std::span<const double> h, std::span<const double> g,
                  std::span<double> out);
void hermite_step_d1(std::span<const double> u, double c1, double c2,
                     std::span<const double> h, std::span<const double> dh,
                     std::span<const double> dg, std::span<double> out);
void hermite_step_d2(std::span<const double> u, double c1, double c2,
                     std::span<const double> dh, std::span<const double> d2h,
                     std::span<const double> d2g, std::span<double> out);

}  // namespace coldatom::kernels
