#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "hyst/kernels.hpp"

namespace k = hyst::kernels;
using k::cplx;

namespace {

std::vector<cplx> random_cvec(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    std::vector<cplx> v(n);
    for (auto& x : v) x = {d(rng), d(rng)};
    return v;
}

std::vector<double> random_rvec(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

// Lengths cover empty input, sub-vector tails and multi-register bodies.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 15, 16, 17, 31, 64, 255, 1024};

class KernelEquivalence : public ::testing::Test {
protected:
    void SetUp() override {
        if (!k::avx2()) GTEST_SKIP() << "AVX2 kernels unavailable on this build or CPU";
    }
    const k::Table& ref = k::scalar();
    const k::Table& simd() { return *k::avx2(); }
    std::mt19937_64 rng{20240611};
};

double tol(std::size_t n) { return 1e-13 * (1.0 + double(n)); }

}  // namespace

TEST(Kernels, ScalarTableIsComplete) {
    const auto& t = k::scalar();
    EXPECT_NE(t.cdotc, nullptr);
    EXPECT_NE(t.cdotu, nullptr);
    EXPECT_NE(t.caxpy, nullptr);
    EXPECT_NE(t.cmul, nullptr);
    EXPECT_NE(t.rscale, nullptr);
    EXPECT_NE(t.abs2, nullptr);
    EXPECT_NE(t.ddot, nullptr);
}

TEST(Kernels, ScalarDotMatchesDefinition) {
    const std::vector<cplx> a{{1, 2}, {3, -1}}, b{{0, 1}, {2, 2}};
    const cplx c = k::scalar().cdotc(a.data(), b.data(), 2);
    const cplx u = k::scalar().cdotu(a.data(), b.data(), 2);
    EXPECT_EQ(c, std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1]);
    EXPECT_EQ(u, a[0] * b[0] + a[1] * b[1]);
}

TEST(Kernels, ActiveTableIsOneOfTheVariants) {
    const auto& a = k::active();
    EXPECT_TRUE(&a == &k::scalar() || &a == k::avx2());
}

TEST_F(KernelEquivalence, Cdotc) {
    for (auto n : kLengths) {
        auto a = random_cvec(n, rng), b = random_cvec(n, rng);
        const cplx r = ref.cdotc(a.data(), b.data(), n), s = simd().cdotc(a.data(), b.data(), n);
        EXPECT_NEAR(std::abs(r - s), 0.0, tol(n)) << "n=" << n;
    }
}

TEST_F(KernelEquivalence, Cdotu) {
    for (auto n : kLengths) {
        auto a = random_cvec(n, rng), b = random_cvec(n, rng);
        const cplx r = ref.cdotu(a.data(), b.data(), n), s = simd().cdotu(a.data(), b.data(), n);
        EXPECT_NEAR(std::abs(r - s), 0.0, tol(n)) << "n=" << n;
    }
}

TEST_F(KernelEquivalence, Caxpy) {
    for (auto n : kLengths) {
        auto x = random_cvec(n, rng), y = random_cvec(n, rng);
        auto y2 = y;
        const cplx alpha{0.3, -1.7};
        ref.caxpy(alpha, x.data(), y.data(), n);
        simd().caxpy(alpha, x.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(std::abs(y[i] - y2[i]), 0.0, 1e-14) << i;
    }
}

TEST_F(KernelEquivalence, Cmul) {
    for (auto n : kLengths) {
        auto d = random_cvec(n, rng), x = random_cvec(n, rng);
        auto x2 = x;
        ref.cmul(d.data(), x.data(), n);
        simd().cmul(d.data(), x2.data(), n);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(std::abs(x[i] - x2[i]), 0.0, 1e-14) << i;
    }
}

TEST_F(KernelEquivalence, RscaleIsExact) {
    for (auto n : kLengths) {
        auto f = random_rvec(n, rng);
        auto x = random_cvec(n, rng);
        auto x2 = x;
        ref.rscale(f.data(), x.data(), n);
        simd().rscale(f.data(), x2.data(), n);
        for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(x[i], x2[i]) << i;
    }
}

TEST_F(KernelEquivalence, Abs2) {
    for (auto n : kLengths) {
        auto x = random_cvec(n, rng);
        std::vector<double> r(n), s(n);
        ref.abs2(x.data(), r.data(), n);
        simd().abs2(x.data(), s.data(), n);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(r[i], s[i], 1e-14 * (1 + r[i])) << i;
    }
}

TEST_F(KernelEquivalence, Ddot) {
    for (auto n : kLengths) {
        auto a = random_rvec(n, rng), b = random_rvec(n, rng);
        EXPECT_NEAR(ref.ddot(a.data(), b.data(), n), simd().ddot(a.data(), b.data(), n), tol(n)) << "n=" << n;
    }
}

TEST_F(KernelEquivalence, UnalignedPointers) {
    auto a = random_cvec(41, rng), b = random_cvec(41, rng);
    const cplx r = ref.cdotc(a.data() + 1, b.data() + 3, 37);
    const cplx s = simd().cdotc(a.data() + 1, b.data() + 3, 37);
    EXPECT_NEAR(std::abs(r - s), 0.0, tol(37));
}
