// AVX2+FMA kernel variants. Compiled with -mavx2 -mfma; only dispatched to
// when the CPU reports both features at runtime.

#ifdef COLDATOM_HAVE_AVX2

#include <immintrin.h>

#include <cstddef>

#include "kernels_impl.hpp"

namespace coldatom::kernels::detail {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// [ar*br - ai*bi, ar*bi + ai*br] for two interleaved complex per vector
inline __m256d cmul(__m256d a, __m256d b) {
    __m256d are = _mm256_movedup_pd(a);           // [ar ar ...]
    __m256d aim = _mm256_permute_pd(a, 0xF);      // [ai ai ...]
    __m256d bsw = _mm256_permute_pd(b, 0x5);      // [bi br ...]
    return _mm256_addsub_pd(_mm256_mul_pd(are, b), _mm256_mul_pd(aim, bsw));
}

double weighted_dot_avx2(const double* w, const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i)),
                               _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(
            _mm256_mul_pd(_mm256_loadu_pd(w + i + 4), _mm256_loadu_pd(a + i + 4)),
            _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(a + i)),
                               _mm256_loadu_pd(b + i), acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += w[i] * a[i] * b[i];
    return acc;
}

double cnorm2_avx2(const cdouble* z, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(z);
    const std::size_t nd = 2 * n;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= nd; i += 4) {
        __m256d v = _mm256_loadu_pd(p + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double out = hsum(acc);
    for (; i < nd; ++i) out += p[i] * p[i];
    return out;
}

cdouble cdot_avx2(const cdouble* a, const cdouble* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    const __m256d signs = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
    __m256d re_acc = _mm256_setzero_pd();
    __m256d im_acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(pa + 2 * i);
        __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        re_acc = _mm256_fmadd_pd(va, vb, re_acc);
        __m256d bs = _mm256_xor_pd(_mm256_permute_pd(vb, 0x5), signs);  // [bi -br ...]
        im_acc = _mm256_fmadd_pd(va, bs, im_acc);
    }
    double re = hsum(re_acc), im = hsum(im_acc);
    for (; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

void cscale_avx2(cdouble* z, std::size_t n, cdouble s) {
    double* p = reinterpret_cast<double*>(z);
    const __m256d sre = _mm256_set1_pd(s.real());
    const __m256d sim = _mm256_set1_pd(s.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(p + 2 * i);
        __m256d sw = _mm256_permute_pd(v, 0x5);
        _mm256_storeu_pd(p + 2 * i,
                         _mm256_addsub_pd(_mm256_mul_pd(v, sre), _mm256_mul_pd(sw, sim)));
    }
    for (; i < n; ++i) z[i] *= s;
}

void penta_apply_avx2(const cdouble* diag, cdouble off1, cdouble off2, const cdouble* x,
                      cdouble* y, std::size_t n) {
    auto edge = [&](std::size_t i) {
        cdouble acc = diag[i] * x[i];
        cdouble near = (i >= 1 ? x[i - 1] : cdouble{});
        if (i + 1 < n) near += x[i + 1];
        cdouble far = (i >= 2 ? x[i - 2] : cdouble{});
        if (i + 2 < n) far += x[i + 2];
        y[i] = acc + off1 * near + off2 * far;
    };
    if (n < 8) {
        for (std::size_t i = 0; i < n; ++i) edge(i);
        return;
    }
    edge(0);
    edge(1);
    const double* pd = reinterpret_cast<const double*>(diag);
    const double* px = reinterpret_cast<const double*>(x);
    double* py = reinterpret_cast<double*>(y);
    const __m256d o1re = _mm256_set1_pd(off1.real());
    const __m256d o1im = _mm256_set1_pd(off1.imag());
    const __m256d o2re = _mm256_set1_pd(off2.real());
    const __m256d o2im = _mm256_set1_pd(off2.imag());
    std::size_t i = 2;
    for (; i + 2 <= n - 2; i += 2) {
        __m256d xc = _mm256_loadu_pd(px + 2 * i);
        __m256d dc = _mm256_loadu_pd(pd + 2 * i);
        __m256d near =
            _mm256_add_pd(_mm256_loadu_pd(px + 2 * i - 2), _mm256_loadu_pd(px + 2 * i + 2));
        __m256d far =
            _mm256_add_pd(_mm256_loadu_pd(px + 2 * i - 4), _mm256_loadu_pd(px + 2 * i + 4));
        __m256d acc = cmul(dc, xc);
        acc = _mm256_add_pd(acc, _mm256_addsub_pd(_mm256_mul_pd(near, o1re),
                                                  _mm256_mul_pd(_mm256_permute_pd(near, 0x5),
                                                                o1im)));
        acc = _mm256_add_pd(acc, _mm256_addsub_pd(_mm256_mul_pd(far, o2re),
                                                  _mm256_mul_pd(_mm256_permute_pd(far, 0x5),
                                                                o2im)));
        _mm256_storeu_pd(py + 2 * i, acc);
    }
    for (; i < n; ++i) edge(i);
}

void hermite_step_avx2(const double* u, double c1, double c2, const double* h, const double* g,
                       double* out, std::size_t n) {
    const __m256d c1v = _mm256_set1_pd(c1);
    const __m256d c2v = _mm256_set1_pd(c2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d uh = _mm256_mul_pd(_mm256_loadu_pd(u + i), _mm256_loadu_pd(h + i));
        _mm256_storeu_pd(out + i,
                         _mm256_fmsub_pd(c1v, uh, _mm256_mul_pd(c2v, _mm256_loadu_pd(g + i))));
    }
    for (; i < n; ++i) out[i] = c1 * u[i] * h[i] - c2 * g[i];
}

void hermite_step_d1_avx2(const double* u, double c1, double c2, const double* h,
                          const double* dh, const double* dg, double* out, std::size_t n) {
    const __m256d c1v = _mm256_set1_pd(c1);
    const __m256d c2v = _mm256_set1_pd(c2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d inner = _mm256_fmadd_pd(_mm256_loadu_pd(u + i), _mm256_loadu_pd(dh + i),
                                        _mm256_loadu_pd(h + i));
        _mm256_storeu_pd(out + i,
                         _mm256_fmsub_pd(c1v, inner, _mm256_mul_pd(c2v, _mm256_loadu_pd(dg + i))));
    }
    for (; i < n; ++i) out[i] = c1 * (h[i] + u[i] * dh[i]) - c2 * dg[i];
}

void hermite_step_d2_avx2(const double* u, double c1, double c2, const double* dh,
                          const double* d2h, const double* d2g, double* out, std::size_t n) {
    const __m256d c1v = _mm256_set1_pd(c1);
    const __m256d c2v = _mm256_set1_pd(c2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d dhv = _mm256_loadu_pd(dh + i);
        __m256d inner = _mm256_fmadd_pd(_mm256_loadu_pd(u + i), _mm256_loadu_pd(d2h + i),
                                        _mm256_add_pd(dhv, dhv));
        _mm256_storeu_pd(
            out + i, _mm256_fmsub_pd(c1v, inner, _mm256_mul_pd(c2v, _mm256_loadu_pd(d2g + i))));
    }
    for (; i < n; ++i) out[i] = c1 * (2.0 * dh[i] + u[i] * d2h[i]) - c2 * d2g[i];
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table = {
        weighted_dot_avx2, cnorm2_avx2,       cdot_avx2,         cscale_avx2,
        penta_apply_avx2,  hermite_step_avx2, hermite_step_d1_avx2,
        hermite_step_d2_avx2,
    };
    return table;
}

}  // namespace coldatom::kernels::detail

#endif  // COLDATOM_HAVE_AVX2
