#pragma once
// Internal backend table shared between kernels.cpp and kernels_avx2.cpp.

#include <complex>
#include <cstddef>

namespace coldatom::kernels::detail {

using cdouble = std::complex<double>;

struct KernelTable {
    double (*weighted_dot)(const double*, const double*, const double*, std::size_t);
    double (*cnorm2)(const cdouble*, std::size_t);
    cdouble (*cdot)(const cdouble*, const cdouble*, std::size_t);
    void (*cscale)(cdouble*, std::size_t, cdouble);
    void (*penta_apply)(const cdouble*, cdouble, cdouble, const cdouble*, cdouble*, std::size_t);
    void (*hermite_step)(const double*, double, double, const double*, const double*, double*,
                         std::size_t);
    void (*hermite_step_d1)(const double*, double, double, const double*, const double*,
                            const double*, double*, std::size_t);
    void (*hermite_step_d2)(const double*, double, double, const double*, const double*,
                            const double*, double*, std::size_t);
};

const KernelTable& scalar_table();
#ifdef COLDATOM_HAVE_AVX2
const KernelTable& avx2_table();
#endif

}  // namespace coldatom::kernels::detail
