#pragma once

#include <complex>
#include <cstddef>

namespace hyst::kernels {

using cplx = std::complex<double>;

// Inner loops shared by propagation, measurement, reweighting and the
// structure factor. Every variant must agree with the scalar table to
// rounding; tests compare them on random inputs.
struct Table {
    const char* name;
    cplx (*cdotc)(const cplx* a, const cplx* b, std::size_t n);  // sum conj(a_i) b_i
    cplx (*cdotu)(const cplx* a, const cplx* b, std::size_t n);  // sum a_i b_i
    void (*caxpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
    void (*cmul)(const cplx* d, cplx* x, std::size_t n);     // x_i *= d_i
    void (*rscale)(const double* f, cplx* x, std::size_t n);  // x_i *= f_i
    void (*abs2)(const cplx* x, double* out, std::size_t n);
    double (*ddot)(const double* a, const double* b, std::size_t n);
};

const Table& scalar();
// nullptr when the build or the CPU lacks AVX2/FMA.
const Table* avx2();
// Chosen once: AVX2 when available unless HYST_KERNELS=scalar.
const Table& active();

}  // namespace hyst::kernels
