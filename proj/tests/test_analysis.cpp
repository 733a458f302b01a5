#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "hyst/analysis.hpp"
#include "hyst/errors.hpp"

using namespace hyst;

namespace {

constexpr double kPi = std::numbers::pi;

TraceRecord rec(double h, double mz, SegmentTag seg, double kinks = 0.0) {
    TraceRecord r;
    r.h = h;
    r.mz = mz;
    r.segment = seg;
    r.kink_total = kinks;
    return r;
}

// Rectangular loop of half-width hc: m = +1 until -hc on the way down,
// m = -1 until +hc on the way up.
HysteresisTrace square_loop(double hc, int n) {
    HysteresisTrace t;
    t.records.push_back(rec(0.0, 1.0, SegmentTag::Ramp));
    t.records.push_back(rec(1.0, 1.0, SegmentTag::Ramp));
    for (int i = 1; i <= n; ++i) {
        const double h = 1.0 - 2.0 * i / n;
        t.records.push_back(rec(h, h > -hc - 1e-12 ? 1.0 : -1.0, SegmentTag::Backward));
    }
    for (int i = 1; i <= n; ++i) {
        const double h = -1.0 + 2.0 * i / n;
        t.records.push_back(rec(h, h < hc - 1e-12 ? -1.0 : 1.0, SegmentTag::Forward));
    }
    for (std::size_t i = 0; i < t.records.size(); ++i) t.records[i].t = double(i);
    return t;
}

std::vector<std::array<double, 2>> square_positions(int L) {
    std::vector<std::array<double, 2>> p;
    for (int y = 0; y < L; ++y)
        for (int x = 0; x < L; ++x) p.push_back({double(x), double(y)});
    return p;
}

}  // namespace

TEST(LoopArea, SquareLoop) {
    // Switching fields sit on grid nodes and both jumps are smeared over
    // one spacing to the left, so the width is exact.
    const auto la = loop_area(square_loop(0.5, 200));
    EXPECT_NEAR(la.signed_area, 4.0 * 0.5, 1e-12);
    EXPECT_NEAR(la.abs_area, 2.0, 1e-12);
}

TEST(LoopArea, IdenticalBranchesGiveZero) {
    HysteresisTrace t;
    t.records.push_back(rec(1.0, std::tanh(2.0), SegmentTag::Ramp));
    for (int i = 1; i <= 50; ++i) t.records.push_back(rec(1.0 - i / 25.0, std::tanh(2.0 * (1.0 - i / 25.0)), SegmentTag::Backward));
    for (int i = 1; i <= 50; ++i) t.records.push_back(rec(-1.0 + i / 25.0, std::tanh(2.0 * (-1.0 + i / 25.0)), SegmentTag::Forward));
    EXPECT_NEAR(loop_area(t).signed_area, 0.0, 1e-14);
}

TEST(LoopArea, PolygonOracle) {
    // Hexagon in the (h, m) plane traversed clockwise; shoelace gives the area.
    const std::vector<std::array<double, 2>> back{{2.0, 1.0}, {1.0, 1.0}, {-1.5, 0.5}, {-2.0, -1.0}};
    const std::vector<std::array<double, 2>> fwd{{-1.0, -1.0}, {1.0, -0.5}, {2.0, 1.0}};
    HysteresisTrace t;
    t.records.push_back(rec(2.0, 1.0, SegmentTag::Ramp));
    for (auto [h, m] : back) t.records.push_back(rec(h, m, SegmentTag::Backward));
    for (auto [h, m] : fwd) t.records.push_back(rec(h, m, SegmentTag::Forward));
    double shoelace = 0.0;
    std::vector<std::array<double, 2>> poly(back);
    poly.insert(poly.end(), fwd.begin(), fwd.end() - 1);
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % poly.size()];
        shoelace += a[0] * b[1] - b[0] * a[1];
    }
    EXPECT_NEAR(loop_area(t).signed_area, 0.5 * std::abs(shoelace), 1e-12);
}

TEST(LoopArea, RefinementInvariantOnStraightEdges) {
    const double a1 = loop_area(square_loop(0.3, 100)).signed_area;
    const double a2 = loop_area(square_loop(0.3, 1000)).signed_area;
    EXPECT_NEAR(a1, a2, 1e-12);
}

TEST(LoopArea, MissingBranch) {
    HysteresisTrace t;
    t.records.push_back(rec(0.0, 1.0, SegmentTag::Ramp));
    t.records.push_back(rec(1.0, 1.0, SegmentTag::Backward));
    try {
        loop_area(t);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IncompleteLoop);
    }
}

TEST(KinkDensity, MaxPerSegment) {
    HysteresisTrace t;
    t.records = {rec(0, 1, SegmentTag::Ramp, 0.9), rec(1, 1, SegmentTag::Backward, 0.2),
                 rec(0, 0, SegmentTag::Backward, 0.6), rec(-1, -1, SegmentTag::Forward, 0.1)};
    EXPECT_EQ(max_kink_density(t, SegmentTag::Backward), 0.6);
    EXPECT_EQ(max_kink_density(t, SegmentTag::Forward), 0.1);
    t.records.pop_back();
    EXPECT_THROW(max_kink_density(t, SegmentTag::Forward), Error);
}

TEST(BackwardBranch, OnsetAndUpturn) {
    HysteresisTrace t;
    t.records = {rec(1.0, 1.0, SegmentTag::Backward), rec(0.0, 0.95, SegmentTag::Backward),
                 rec(-1.0, 0.5, SegmentTag::Backward), rec(-2.0, 0.6, SegmentTag::Backward)};
    EXPECT_EQ(reversal_onset(t).value(), -1.0);
    EXPECT_TRUE(has_backward_upturn(t));
    t.records.back().mz = 0.4;
    EXPECT_FALSE(has_backward_upturn(t));
    EXPECT_FALSE(reversal_onset(t, 0.1).has_value());
}

TEST(LinearFit, ExactLine) {
    const auto f = linear_fit({1, 2, 3, 4}, {-1, -3, -5, -7});
    EXPECT_NEAR(f.slope, -2.0, 1e-14);
    EXPECT_NEAR(f.intercept, 1.0, 1e-14);
    EXPECT_EQ(f.r_squared, 1.0);
    EXPECT_EQ(f.n_points, 4);
}

TEST(LinearFit, ConstantTargets) {
    const auto f = linear_fit({1, 2, 5}, {3, 3, 3});
    EXPECT_EQ(f.slope, 0.0);
    EXPECT_EQ(f.r_squared, 1.0);
}

TEST(LinearFit, Errors) {
    try {
        linear_fit({2, 2, 2}, {1, 2, 3});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Rank);
    }
    try {
        linear_fit({1, 2}, {1, 2});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
    }
}

TEST(LinearFit, PermutationInvariant) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> d;
    std::vector<double> x(40), y(40);
    for (int i = 0; i < 40; ++i) x[i] = d(rng), y[i] = 0.7 * x[i] + d(rng);
    const auto a = linear_fit(x, y);
    std::vector<int> idx(40);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<double> xs, ys;
    for (int i : idx) xs.push_back(x[i]), ys.push_back(y[i]);
    const auto b = linear_fit(xs, ys);
    EXPECT_EQ(a.slope, b.slope);
    EXPECT_EQ(a.intercept, b.intercept);
    EXPECT_EQ(a.r_squared, b.r_squared);
}

TEST(PowerLaw, ExactRecovery) {
    std::vector<double> g, A;
    for (int i = 0; i < 8; ++i) {
        g.push_back(0.01 * std::pow(10.0, i / 7.0));
        A.push_back(3.0 * std::pow(g.back(), 2.0) + 0.5);
    }
    const auto f = power_law_fit(g, A);
    EXPECT_NEAR(f.alpha, 2.0, 1e-6);
    EXPECT_NEAR(f.a, 3.0, 1e-4);
    EXPECT_NEAR(f.c, 0.5, 1e-9);
}

TEST(PowerLaw, NoisyRecovery) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> d(0.0, 0.01);
    std::vector<double> g, A;
    for (int i = 0; i < 10; ++i) {
        g.push_back(0.1 + 0.1 * i);
        A.push_back((2.0 * std::pow(g.back(), 1.5) + 0.2) * (1.0 + d(rng)));
    }
    EXPECT_NEAR(power_law_fit(g, A).alpha, 1.5, 0.1);
}

TEST(PowerLaw, NeedsFourPoints) {
    try {
        power_law_fit({0.1, 0.2, 0.3}, {1, 2, 3});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
    }
    EXPECT_THROW(power_law_fit({0.1, 0.2, 0.2, 0.3}, {1, 2, 3, 4}), Error);
}

TEST(KinkTheory, SlopeValue) {
    EXPECT_NEAR(theoretical_kink_slope(0.1), -0.125, 1e-15);
    EXPECT_NEAR(theoretical_kink_slope(0.1, 0.5), -0.25, 1e-15);
}

TEST(Sampling, BasisStateIsDeterministic) {
    QuantumState psi{3, std::vector<cplx>(8)};
    psi.amp[0b101] = cplx(0.0, 1.0);
    const auto e = sample_configurations(psi, 50, 7);
    ASSERT_EQ(e.configs.size(), 50u);
    for (const auto& c : e.configs) EXPECT_EQ(c, (std::vector<int>{-1, 1, -1}));
    const auto flipped = sample_configurations(psi, 1, 7, {1, -1, 1});
    EXPECT_EQ(flipped.configs[0], (std::vector<int>{-1, -1, -1}));
}

TEST(Sampling, EqualSuperposition) {
    QuantumState psi{1, {cplx(1.0 / std::sqrt(2.0)), cplx(0.0, 1.0 / std::sqrt(2.0))}};
    const auto idx = sample_indices(psi, 100000, 5);
    const double frac = double(std::count(idx.begin(), idx.end(), 0u)) / idx.size();
    EXPECT_NEAR(frac, 0.5, 0.01);
    EXPECT_EQ(idx, sample_indices(psi, 100000, 5));
}

TEST(Sampling, MagnetizationWithinStatisticalError) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> d;
    QuantumState psi{6, std::vector<cplx>(64)};
    for (auto& a : psi.amp) a = {d(rng), d(rng)};
    psi.normalize();
    double exact = 0.0, second = 0.0;
    for (std::uint64_t i = 0; i < 64; ++i) {
        double m = 0.0;
        for (int k = 0; k < 6; ++k) m += spin_of(i, k, 6);
        m /= 6.0;
        exact += std::norm(psi.amp[i]) * m;
        second += std::norm(psi.amp[i]) * m * m;
    }
    const std::size_t n = 20000;
    const double sigma = std::sqrt((second - exact * exact) / n);
    EXPECT_NEAR(sample_configurations(psi, n, 99).magnetization(), exact, 3.0 * sigma);
}

TEST(StructureFactor, UniformConfiguration) {
    const int L = 4;
    QGrid g;
    g.nx = g.ny = 9;  // q = 0 sits at the centre
    const auto S = structure_factor({std::vector<int>(L * L, 1)}, square_positions(L), g);
    EXPECT_NEAR(S(4, 4), std::pow(L, 4), 1e-9);
    EXPECT_EQ(S.maxCoeff(), S(4, 4));
}

TEST(StructureFactor, CheckerboardPeaksAtZoneCorner) {
    const int L = 6;
    std::vector<int> c(L * L);
    for (int y = 0; y < L; ++y)
        for (int x = 0; x < L; ++x) c[y * L + x] = (x + y) % 2 ? -1 : 1;
    QGrid g;
    g.nx = g.ny = 9;  // step pi/2, so index 6 is q = pi
    const auto S = structure_factor({c}, square_positions(L), g);
    EXPECT_NEAR(S(6, 6), std::pow(L, 4), 1e-9);
    EXPECT_NEAR(S(4, 4), 0.0, 1e-9);
}

TEST(StructureFactor, MatchesPairSum) {
    const int L = 8;
    std::vector<int> wall(L * L), rnd(L * L);
    std::mt19937_64 rng(21);
    for (int i = 0; i < L * L; ++i) {
        wall[i] = (i % L) < L / 2 ? 1 : -1;
        rnd[i] = rng() & 1 ? 1 : -1;
    }
    const auto pos = square_positions(L);
    QGrid g;
    g.nx = g.ny = 17;
    for (const auto& c : {wall, rnd}) {
        const auto S = structure_factor({c}, pos, g);
        for (int j = 0; j < g.ny; j += 3)
            for (int i = 0; i < g.nx; i += 2)
                EXPECT_NEAR(S(j, i), structure_factor_pair_sum(c, pos, g.qx(i), g.qy(j)), 1e-9);
    }
}

TEST(StructureFactor, InversionSymmetric) {
    std::mt19937_64 rng(4);
    std::vector<std::vector<int>> configs(5, std::vector<int>(25));
    for (auto& c : configs)
        for (auto& v : c) v = rng() & 1 ? 1 : -1;
    QGrid g;
    g.nx = g.ny = 21;
    const auto S = structure_factor(configs, square_positions(5), g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) EXPECT_NEAR(S(j, i), S(g.ny - 1 - j, g.nx - 1 - i), 1e-9);
}

TEST(StructureFactor, Validation) {
    EXPECT_THROW(structure_factor({}, square_positions(2)), Error);
    EXPECT_THROW(structure_factor({{1, 1, 1}}, square_positions(2)), Error);
}
