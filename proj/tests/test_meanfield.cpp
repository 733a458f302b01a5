#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hyst/analysis.hpp"
#include "hyst/errors.hpp"
#include "hyst/meanfield.hpp"

using namespace hyst;

namespace {

MfaParams sine_params(double gamma) {
    MfaParams p;
    p.gamma = gamma;
    p.drive.kind = MfaDrive::Kind::Sine;
    return p;
}

}  // namespace

TEST(MfaDerivatives, ClassicalFixedPoint) {
    for (auto variant : {MfaVariant::WeakGamma, MfaVariant::Full}) {
        auto p = sine_params(0.0);
        p.variant = variant;
        p.coordination = 0;
        p.beta = 1.7;
        for (double t : {0.3, 1.1, 4.0}) {
            const MagnetizationVector m{0.0, 0.0, std::tanh(p.beta * p.drive.h(t))};
            const auto d = mfa_derivatives(m, t, p);
            EXPECT_NEAR(d.mx, 0.0, 1e-15);
            EXPECT_NEAR(d.my, 0.0, 1e-15);
            EXPECT_NEAR(d.mz, 0.0, 1e-15);
        }
    }
}

TEST(MfaDerivatives, VariantsAgreeAtLeadingOrder) {
    // Longitudinal state at a turning point of the drive (hdot = 0).
    for (double g : {1e-2, 3e-3, 1e-3}) {
        auto weak = sine_params(g);
        auto full = weak;
        full.variant = MfaVariant::Full;
        const double t = std::numbers::pi / 2.0;
        const MagnetizationVector m{0.0, 0.0, 0.4};
        const double dw = mfa_derivatives(m, t, weak).mz, df = mfa_derivatives(m, t, full).mz;
        EXPECT_LT(std::abs(dw - df), 10.0 * g * g) << g;
    }
}

TEST(MfaDerivatives, SingularAngle) {
    auto p = sine_params(0.0);
    p.variant = MfaVariant::Full;
    p.coordination = 0;
    const MagnetizationVector m{0.0, 0.0, 0.5};
    try {
        mfa_derivatives(m, 0.0, p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Singularity);
    }
    EXPECT_NO_THROW(mfa_derivatives(m, 0.0, p, true));
}

TEST(MfaRun, ExactRelaxation) {
    auto p = sine_params(0.0);
    p.drive.h1 = 0.0;
    p.coordination = 0;
    p.lambda = 0.3;
    const auto tr = run_mfa(p);
    ASSERT_FALSE(tr.partial);
    for (const auto& r : tr.records) {
        EXPECT_NEAR(r.mz, std::exp(-2.0 * p.lambda * r.t), 1e-12);
        EXPECT_EQ(r.mx, 0.0);
        EXPECT_EQ(r.my, 0.0);
    }
}

TEST(MfaRun, SineLoopCloses) {
    const auto tr = run_mfa(sine_params(0.05));
    ASSERT_FALSE(tr.partial);
    EXPECT_NEAR(tr.records.back().h, 1.0, 1e-9);
    bool saw_b = false, saw_f = false;
    for (const auto& r : tr.records) {
        saw_b |= r.segment == SegmentTag::Backward;
        saw_f |= r.segment == SegmentTag::Forward;
        EXPECT_LE(std::hypot(r.mx, r.my, r.mz), 1.0 + 1e-6);
    }
    EXPECT_TRUE(saw_b && saw_f);
    EXPECT_GT(loop_area(tr).abs_area, 0.0);
}

TEST(MfaRun, FastRelaxationShrinksLoop) {
    auto slow = sine_params(0.0);
    slow.coordination = 0;
    slow.lambda = 0.05;
    auto fast = slow;
    fast.lambda = 5.0;
    fast.drive.omega = 0.1;
    fast.dt = 1e-2;
    const double a_slow = loop_area(run_mfa(slow)).abs_area;
    const double a_fast = loop_area(run_mfa(fast)).abs_area;
    EXPECT_LT(a_fast, 0.05 * a_slow);
}

TEST(MfaRun, LeavingUnitBallGivesPartialTrace) {
    auto p = sine_params(0.5);
    p.beta = 20.0;
    p.lambda = 1.0;
    p.dt = 0.2;
    const auto tr = run_mfa(p);
    EXPECT_TRUE(tr.partial);
    EXPECT_TRUE(tr.failure_numeric);
    EXPECT_NE(tr.failure.find("unit ball"), std::string::npos);
}

TEST(MfaRun, Validation) {
    auto p = sine_params(0.1);
    p.lambda = -1.0;
    EXPECT_THROW(run_mfa(p), Error);
}

TEST(InteractionPicture, NoTransverseFieldStaysPolarised) {
    const auto tr = interaction_picture_trace(0.0, DriveProtocol::standard(3.0, 50.0), 0.01, 5);
    for (const auto& r : tr.records) EXPECT_EQ(r.mz, 1.0);
}

TEST(InteractionPicture, ZeroFieldPrecession) {
    DriveProtocol d;
    d.t_total = 20.0;
    d.h_max = 1.0;
    d.segments = {{1.0, 0.0, 0.0}};
    const double g = 0.3;
    const auto tr = interaction_picture_trace(g, d, 0.01);
    for (const auto& r : tr.records) EXPECT_NEAR(r.mz, std::cos(2.0 * g * r.t), 1e-12);
}
