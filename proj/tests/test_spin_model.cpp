#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hyst/drive.hpp"
#include "hyst/errors.hpp"
#include "hyst/lattice.hpp"
#include "hyst/quantum.hpp"
#include "hyst/schedule.hpp"

using namespace hyst;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no hyst::Error thrown";
    return ErrorKind::Contract;
}

}  // namespace

TEST(Lattice, RingOfFour) {
    const auto r = build_ring(4, 1.0);
    ASSERT_EQ(r.n_spins, 4);
    ASSERT_EQ(r.bonds.size(), 4u);
    const int expect[4][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    for (int i = 0; i < 4; ++i) {
        EXPECT_EQ(r.bonds[i].a, expect[i][0]);
        EXPECT_EQ(r.bonds[i].b, expect[i][1]);
        EXPECT_EQ(r.bonds[i].J, 1.0);
    }
    for (double f : r.local_fields) EXPECT_EQ(f, 1.0);
    EXPECT_EQ(r.topology, Topology::RingPBC);
}

TEST(Lattice, HundredSpinRing) {
    const auto r = build_ring(100, 1.0);
    EXPECT_EQ(r.bonds.size(), 100u);
    EXPECT_NO_THROW(r.validate());
}

TEST(Lattice, DegenerateRingRejected) {
    EXPECT_EQ(kind_of([] { build_ring(1, 1.0); }), ErrorKind::InvalidLattice);
}

TEST(Lattice, GridBondCounts) {
    EXPECT_EQ(build_grid(2, 2, 1.0).bonds.size(), 4u);
    const auto g = build_grid(25, 25, 1.0);
    EXPECT_EQ(g.n_spins, 625);
    EXPECT_EQ(g.bonds.size(), 1200u);
    EXPECT_EQ(kind_of([] { build_grid(1, 5, 1.0); }), ErrorKind::InvalidLattice);
}

TEST(Lattice, CustomValidation) {
    EXPECT_EQ(kind_of([] { build_custom(3, {{0, 0, 1.0}}); }), ErrorKind::InvalidLattice);
    EXPECT_EQ(kind_of([] { build_custom(3, {{0, 3, 1.0}}); }), ErrorKind::InvalidLattice);
    EXPECT_EQ(kind_of([] { build_custom(3, {{0, 1, 1.0}, {1, 0, 1.0}}); }), ErrorKind::InvalidLattice);
    EXPECT_NO_THROW(build_custom(3, {{0, 1, 1.0}, {1, 2, -0.5}}));
}

TEST(Lattice, AfmGauge) {
    const auto g = apply_afm_gauge(build_ring(4, 1.0));
    for (const auto& b : g.bonds) EXPECT_EQ(b.J, -1.0);
    EXPECT_EQ(g.local_fields, (std::vector<double>{1, -1, 1, -1}));
    EXPECT_TRUE(g.gauged());
    EXPECT_EQ(kind_of([] { apply_afm_gauge(build_ring(3, 1.0)); }), ErrorKind::GaugeInfeasible);
    EXPECT_EQ(kind_of([] { apply_afm_gauge(build_grid(2, 2, 1.0)); }), ErrorKind::GaugeInfeasible);
}

TEST(Lattice, GaugedGroundStateReadsAsFerromagnet) {
    const auto fm = build_ring(4, 1.0);
    const auto afm = apply_afm_gauge(fm);
    auto ground = [](const LatticeSpec& l) {
        const Spectrum s = eigendecompose(build_hamiltonian(l, 0.1, 0.5));
        QuantumState psi{l.n_spins, std::vector<cplx>(s.vectors.rows())};
        for (Eigen::Index i = 0; i < s.vectors.rows(); ++i) psi.amp[i] = s.vectors(i, 0);
        return observe(psi, l);
    };
    const Observables a = ground(fm), b = ground(afm);
    EXPECT_NEAR(a.mz, b.mz, 1e-10);
    EXPECT_NEAR(a.kink_total, b.kink_total, 1e-10);
}

TEST(Lattice, GaugeIsAnInvolutionOnProductStates) {
    const auto fm = build_ring(6, 1.0);
    const auto afm = apply_afm_gauge(fm);
    for (std::uint64_t i = 0; i < 64; ++i) {
        // Flipping odd sites maps a ferromagnetic basis state to its gauge partner.
        std::uint64_t j = i;
        for (int s = 1; s < 6; s += 2) j ^= site_mask(s, 6);
        const Observables a = observe(QuantumState::basis(6, i), fm);
        const Observables b = observe(QuantumState::basis(6, j), afm);
        EXPECT_DOUBLE_EQ(a.mz, b.mz);
        EXPECT_EQ(a.kinks_plus, b.kinks_plus);
        EXPECT_EQ(a.kinks_minus, b.kinks_minus);
    }
}

TEST(Schedule, LookupAtRowsAndMidpoint) {
    Schedule s{{{0.0, 2.0, 1.0}, {1.0, 1.0, 3.0}}};
    const auto row = schedule_lookup(s, 0.0);
    EXPECT_EQ(row.A, 2.0);
    EXPECT_EQ(row.B, 1.0);
    const auto mid = schedule_lookup(s, 0.5);
    EXPECT_DOUBLE_EQ(mid.A, 1.5);
    EXPECT_DOUBLE_EQ(mid.B, 2.0);
    EXPECT_EQ(kind_of([&] { schedule_lookup(s, 1.5); }), ErrorKind::OutOfRange);
}

TEST(Schedule, MonotonicityEnforced) {
    Schedule dec_b{{{0.0, 2.0, 3.0}, {1.0, 1.0, 1.0}}};
    EXPECT_EQ(kind_of([&] { dec_b.validate(); }), ErrorKind::Validation);
    Schedule inc_a{{{0.0, 1.0, 1.0}, {1.0, 2.0, 2.0}}};
    EXPECT_EQ(kind_of([&] { inc_a.validate(); }), ErrorKind::Validation);
    Schedule dup_s{{{0.5, 1.0, 1.0}, {0.5, 1.0, 2.0}}};
    EXPECT_EQ(kind_of([&] { dup_s.validate(); }), ErrorKind::Validation);
}

TEST(Schedule, LookupIsMonotone) {
    Schedule s{{{0.0, 5.0, 0.1}, {0.3, 2.0, 1.0}, {0.6, 0.5, 4.0}, {1.0, 0.0, 9.0}}};
    double pa = 1e9, pb = -1e9;
    for (int i = 0; i <= 200; ++i) {
        const auto v = schedule_lookup(s, i / 200.0);
        EXPECT_LE(v.A, pa);
        EXPECT_GE(v.B, pb);
        pa = v.A, pb = v.B;
    }
}

TEST(Units, Hbar) {
    EXPECT_EQ(UnitSystem{EnergyUnit::Natural}.hbar(), 1.0);
    EXPECT_DOUBLE_EQ(UnitSystem{EnergyUnit::Device}.hbar(), 1.0 / (2.0 * std::numbers::pi));
}

TEST(Drive, StandardProtocolValues) {
    const auto p = DriveProtocol::standard(3.0, 100.0);
    const auto a = drive_value(p, 20.0);
    EXPECT_DOUBLE_EQ(a.h, 3.0);
    const auto b = drive_value(p, 40.0);
    EXPECT_NEAR(b.h, 0.0, 1e-12);
    EXPECT_DOUBLE_EQ(b.hdot, -5.0 * 3.0 / 100.0);
    const auto c = drive_value(p, 100.0);
    EXPECT_DOUBLE_EQ(c.h, 3.0);
    EXPECT_DOUBLE_EQ(c.hdot, 5.0 * 3.0 / 100.0);
}

TEST(Drive, SlopeIsLeftContinuous) {
    const auto p = DriveProtocol::standard(2.0, 10.0);
    EXPECT_GT(drive_value(p, 2.0).hdot, 0.0);  // end of the ramp
    EXPECT_LT(drive_value(p, 6.0).hdot, 0.0);  // end of the backward sweep
}

TEST(Drive, Continuity) {
    const auto p = DriveProtocol::standard(3.0, 7.0);
    for (std::size_t s = 1; s < p.segments.size(); ++s) {
        const double tb = p.segment_start(s);
        const double l = drive_value(p, std::nextafter(tb, 0.0)).h;
        const double r = drive_value(p, std::nextafter(tb, 1e9)).h;
        EXPECT_NEAR(l, r, 1e-12);
    }
}

TEST(Drive, SweepRateOnBothSweeps) {
    const auto p = DriveProtocol::standard(1.7, 33.0);
    for (double t = 6.7; t < 33.0; t += 0.91)
        EXPECT_NEAR(std::abs(drive_value(p, t).hdot), 5.0 * 1.7 / 33.0, 1e-12);
}

TEST(Drive, Tags) {
    const auto p = DriveProtocol::standard(3.0, 10.0);
    EXPECT_EQ(p.tag(0), SegmentTag::Ramp);
    EXPECT_EQ(p.tag(1), SegmentTag::Backward);
    EXPECT_EQ(p.tag(2), SegmentTag::Forward);
    EXPECT_EQ(parse_segment_name(segment_name(SegmentTag::Forward)), SegmentTag::Forward);
}

TEST(Drive, FractionsMustSumToOne) {
    DriveProtocol p;
    p.t_total = 1.0;
    p.segments = {{0.2, 0.0, 3.0}, {0.3, 3.0, -3.0}, {0.4, -3.0, 3.0}};
    EXPECT_EQ(kind_of([&] { p.validate(); }), ErrorKind::Validation);
    p.segments = {{0.2, 0.0, 3.0}, {0.4, 2.0, -3.0}, {0.4, -3.0, 3.0}};
    EXPECT_EQ(kind_of([&] { p.validate(); }), ErrorKind::Validation);
}
