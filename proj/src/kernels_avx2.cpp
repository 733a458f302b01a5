// Built with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "hyst/kernels.hpp"

namespace hyst::kernels {
namespace {

inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// Lane-alternating sum: v0 - v1 + v2 - v3.
inline double hsum_alt(__m256d v) {
    const __m256d sign = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
    return hsum(_mm256_mul_pd(v, sign));
}

cplx cdotc_avx2(const cplx* a, const cplx* b, std::size_t n) {
    __m256d rr = _mm256_setzero_pd(), ri = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d A = _mm256_loadu_pd(dp(a + i));
        const __m256d B = _mm256_loadu_pd(dp(b + i));
        rr = _mm256_fmadd_pd(A, B, rr);
        ri = _mm256_fmadd_pd(A, _mm256_permute_pd(B, 0b0101), ri);
    }
    double re = hsum(rr);
    double im = hsum_alt(ri);
    for (; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

cplx cdotu_avx2(const cplx* a, const cplx* b, std::size_t n) {
    __m256d rr = _mm256_setzero_pd(), ri = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d A = _mm256_loadu_pd(dp(a + i));
        const __m256d B = _mm256_loadu_pd(dp(b + i));
        rr = _mm256_fmadd_pd(A, B, rr);
        ri = _mm256_fmadd_pd(A, _mm256_permute_pd(B, 0b0101), ri);
    }
    double re = hsum_alt(rr);
    double im = hsum(ri);
    for (; i < n; ++i) {
        re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
    }
    return {re, im};
}

void caxpy_avx2(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d X = _mm256_loadu_pd(dp(x + i));
        const __m256d t = _mm256_mul_pd(ai, _mm256_permute_pd(X, 0b0101));
        const __m256d ax = _mm256_fmaddsub_pd(ar, X, t);
        _mm256_storeu_pd(dp(y + i), _mm256_add_pd(_mm256_loadu_pd(dp(y + i)), ax));
    }
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = {y[i].real() + alpha.real() * xr - alpha.imag() * xi,
                y[i].imag() + alpha.real() * xi + alpha.imag() * xr};
    }
}

void cmul_avx2(const cplx* d, cplx* x, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d D = _mm256_loadu_pd(dp(d + i));
        const __m256d X = _mm256_loadu_pd(dp(x + i));
        const __m256d dr = _mm256_movedup_pd(D);
        const __m256d di = _mm256_permute_pd(D, 0b1111);
        const __m256d t = _mm256_mul_pd(di, _mm256_permute_pd(X, 0b0101));
        _mm256_storeu_pd(dp(x + i), _mm256_fmaddsub_pd(dr, X, t));
    }
    for (; i < n; ++i) {
        const double dr = d[i].real(), di = d[i].imag();
        const double xr = x[i].real(), xi = x[i].imag();
        x[i] = {dr * xr - di * xi, dr * xi + di * xr};
    }
}

void rscale_avx2(const double* f, cplx* x, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d F = _mm256_loadu_pd(f + i);
        const __m256d lo = _mm256_permute4x64_pd(F, 0b01010000);
        const __m256d hi = _mm256_permute4x64_pd(F, 0b11111010);
        _mm256_storeu_pd(dp(x + i), _mm256_mul_pd(lo, _mm256_loadu_pd(dp(x + i))));
        _mm256_storeu_pd(dp(x + i + 2), _mm256_mul_pd(hi, _mm256_loadu_pd(dp(x + i + 2))));
    }
    for (; i < n; ++i) x[i] = {f[i] * x[i].real(), f[i] * x[i].imag()};
}

void abs2_avx2(const cplx* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(dp(x + i));
        const __m256d b = _mm256_loadu_pd(dp(x + i + 2));
        const __m256d s = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
        _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(s, 0b11011000));
    }
    for (; i < n; ++i) out[i] = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
}

double ddot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
        s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
    }
    for (; i + 4 <= n; i += 4)
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    double s = hsum(_mm256_add_pd(s0, s1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

const Table& avx2_table() {
    static const Table t{"avx2", cdotc_avx2, cdotu_avx2, caxpy_avx2, cmul_avx2,
                         rscale_avx2, abs2_avx2, ddot_avx2};
    return t;
}

}  // namespace hyst::kernels
