#include "coldatom/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace coldatom::kernels {

namespace detail {
namespace {

double weighted_dot_scalar(const double* w, const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * a[i] * b[i];
    return acc;
}

double cnorm2_scalar(const cdouble* z, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
    return acc;
}

cdouble cdot_scalar(const cdouble* a, const cdouble* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

void cscale_scalar(cdouble* z, std::size_t n, cdouble s) {
    for (std::size_t i = 0; i < n; ++i) z[i] *= s;
}

void penta_apply_scalar(const cdouble* diag, cdouble off1, cdouble off2, const cdouble* x,
                        cdouble* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        cdouble acc = diag[i] * x[i];
        cdouble near = (i >= 1 ? x[i - 1] : cdouble{});
        if (i + 1 < n) near += x[i + 1];
        cdouble far = (i >= 2 ? x[i - 2] : cdouble{});
        if (i + 2 < n) far += x[i + 2];
        y[i] = acc + off1 * near + off2 * far;
    }
}

void hermite_step_scalar(const double* u, double c1, double c2, const double* h, const double* g,
                         double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = c1 * u[i] * h[i] - c2 * g[i];
}

void hermite_step_d1_scalar(const double* u, double c1, double c2, const double* h,
                            const double* dh, const double* dg, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = c1 * (h[i] + u[i] * dh[i]) - c2 * dg[i];
}

void hermite_step_d2_scalar(const double* u, double c1, double c2, const double* dh,
                            const double* d2h, const double* d2g, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = c1 * (2.0 * dh[i] + u[i] * d2h[i]) - c2 * d2g[i];
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table = {
        weighted_dot_scalar, cnorm2_scalar,       cdot_scalar,         cscale_scalar,
        penta_apply_scalar,  hermite_step_scalar, hermite_step_d1_scalar,
        hermite_step_d2_scalar,
    };
    return table;
}

}  // namespace detail

namespace {

using detail::KernelTable;

bool avx2_runtime_ok() {
#if defined(COLDATOM_HAVE_AVX2) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* table_for(Backend b) {
    switch (b) {
        case Backend::scalar:
            return &detail::scalar_table();
        case Backend::avx2:
#ifdef COLDATOM_HAVE_AVX2
            if (avx2_runtime_ok()) return &detail::avx2_table();
#endif
            return nullptr;
    }
    return nullptr;
}

struct Dispatch {
    std::atomic<const KernelTable*> table;
    std::atomic<Backend> backend;

    Dispatch() {
        Backend chosen = avx2_runtime_ok() ? Backend::avx2 : Backend::scalar;
        if (const char* env = std::getenv("COLDATOM_KERNELS")) {
            std::string name(env);
            Backend requested = chosen;
            if (name == "scalar") requested = Backend::scalar;
            else if (name == "avx2") requested = Backend::avx2;
            if (table_for(requested) != nullptr) chosen = requested;
        }
        backend.store(chosen);
        table.store(table_for(chosen));
    }
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

const KernelTable& active() { return *dispatch().table.load(std::memory_order_relaxed); }

}  // namespace

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "?";
}

Backend active_backend() { return dispatch().backend.load(); }

std::vector<Backend> available_backends() {
    std::vector<Backend> out{Backend::scalar};
    if (table_for(Backend::avx2) != nullptr) out.push_back(Backend::avx2);
    return out;
}

void set_backend(Backend b) {
    const KernelTable* t = table_for(b);
    if (t == nullptr)
        throw std::invalid_argument(std::string("kernel backend unavailable: ") + backend_name(b));
    dispatch().backend.store(b);
    dispatch().table.store(t);
}

double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b) {
    return active().weighted_dot(w.data(), a.data(), b.data(), w.size());
}

double cnorm2(std::span<const cdouble> z) { return active().cnorm2(z.data(), z.size()); }

cdouble cdot(std::span<const cdouble> a, std::span<const cdouble> b) {
    return active().cdot(a.data(), b.data(), a.size());
}

void cscale(std::span<cdouble> z, cdouble s) { active().cscale(z.data(), z.size(), s); }

void penta_apply(std::span<const cdouble> diag, cdouble off1, cdouble off2,
                 std::span<const cdouble> x, std::span<cdouble> y) {
    active().penta_apply(diag.data(), off1, off2, x.data(), y.data(), x.size());
}

void hermite_step(std::span<const double> u, double c1, double c2, std::span<const double> h,
                  std::span<const double> g, std::span<double> out) {
    active().hermite_step(u.data(), c1, c2, h.data(), g.data(), out.data(), u.size());
}

void hermite_step_d1(std::span<const double> u, double c1, double c2, std::span<const double> h,
                     std::span<const double> dh, std::span<const double> dg,
                     std::span<double> out) {
    active().hermite_step_d1(u.data(), c1, c2, h.data(), dh.data(), dg.data(), out.data(),
                             u.size());
}

void hermite_step_d2(std::span<const double> u, double c1, double c2, std::span<const double> dh,
                     std::span<const double> d2h, std::span<const double> d2g,
                     std::span<double> out) {
    active().hermite_step_d2(u.data(), c1, c2, dh.data(), d2h.data(), d2g.data(), out.data(),
                             u.size());
}

}  // namespace coldatom::kernels
