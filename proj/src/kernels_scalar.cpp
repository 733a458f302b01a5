#include "hyst/kernels.hpp"

namespace hyst::kernels {
namespace {

cplx cdotc_ref(const cplx* a, const cplx* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

cplx cdotu_ref(const cplx* a, const cplx* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
    }
    return {re, im};
}

void caxpy_ref(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const double ar = alpha.real(), ai = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = {y[i].real() + ar * xr - ai * xi, y[i].imag() + ar * xi + ai * xr};
    }
}

void cmul_ref(const cplx* d, cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double dr = d[i].real(), di = d[i].imag();
        const double xr = x[i].real(), xi = x[i].imag();
        x[i] = {dr * xr - di * xi, dr * xi + di * xr};
    }
}

void rscale_ref(const double* f, cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = {f[i] * x[i].real(), f[i] * x[i].imag()};
}

void abs2_ref(const cplx* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
}

double ddot_ref(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

const Table& scalar() {
    static const Table t{"scalar", cdotc_ref, cdotu_ref, caxpy_ref, cmul_ref,
                         rscale_ref, abs2_ref, ddot_ref};
    return t;
}

}  // namespace hyst::kernels
