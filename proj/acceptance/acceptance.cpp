// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Set HYST_KERNELS=scalar to run on the reference kernels.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hyst/analysis.hpp"
#include "hyst/errors.hpp"
#include "hyst/hybrid.hpp"
#include "hyst/kernels.hpp"
#include "hyst/lz.hpp"
#include "hyst/meanfield.hpp"
#include "hyst/quantum.hpp"

using namespace hyst;

namespace {

constexpr double kPi = std::numbers::pi;
const double kRatios[3] = {2.34, 7.87, 37.4};

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(const char* id, const char* name, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > limit_s) {
        o.pass = false;
        o.detail += "; over the time limit";
    }
    failures += !o.pass;
    std::printf("[%s] %-3s %s: %s (%.2f s, limit %.0f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
                secs, limit_s);
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

HybridConfig ring4(double j_over_gamma, double t_total, HybridMode mode = HybridMode::Hybrid) {
    HybridConfig c;
    c.lattice = build_ring(4, 1.0);
    c.drive = DriveProtocol::standard(3.0, t_total);
    c.gamma = 1.0 / j_over_gamma;
    c.dt = 0.01;
    c.mode = mode;
    return c;
}

double backward_end_mz(const HysteresisTrace& t) {
    double m = 0.0;
    for (const auto& r : t.records)
        if (r.segment == SegmentTag::Backward) m = r.mz;
    return m;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

Outcome hamiltonian_matrix() {
    // Dyadic parameters keep every entry exact in binary floating point.
    const double J = 1.25, G = 0.375, h = -0.5;
    const auto H = build_hamiltonian(build_ring(3, J), G, h).m;
    // Reference row order: all up, single flips at sites 0, 1, 2, double
    // flips (0,1), (0,2), (1,2), all down.
    const int order[8] = {0, 4, 2, 1, 6, 5, 3, 7};
    int mismatches = 0;
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) {
            const std::uint64_t a = order[r], b = order[c];
            double want = 0.0;
            if (r == c) {
                double zz = 0.0, z = 0.0;
                for (int k = 0; k < 3; ++k) {
                    zz += spin_of(a, k, 3) * spin_of(a, (k + 1) % 3, 3);
                    z += spin_of(a, k, 3);
                }
                want = -J * zz - h * z;
            } else if (std::popcount(a ^ b) == 1) {
                want = -G;
            }
            mismatches += H(a, b) != cplx(want);
        }
    return {mismatches == 0, fmt("%d of 64 entries differ", mismatches)};
}

Outcome lz_agreement() {
    double worst = 0.0;
    for (double x : linspace(0.1, 10.0, 5))
        for (double gamma : {0.1, 0.3, 0.5, 1.0, 2.0}) {
            const double hdot = kPi * gamma * gamma / (2.0 * x);
            const double pf = lz_probability(gamma, hdot).p;
            const double pn = lz_numeric_oracle(LzParams::from_tfim(gamma, hdot)).p;
            worst = std::max(worst, std::abs(pf - pn));
        }
    const double p0 = lz_probability(0.0, 0.5).p;
    const double p0_numeric = lz_numeric_oracle(LzParams::from_tfim(0.0, 0.5)).p;
    return {worst < 1e-2 && p0 == 1.0 && p0_numeric == 1.0,
            fmt("max |p_formula - p_numeric| = %.3g, p(gamma=0) = %.17g / %.17g", worst, p0, p0_numeric)};
}

Outcome crossing_location() {
    const auto grid = linspace(-3.0, 0.0, 121);
    double lo = 1e9, hi = -1e9;
    int outside = 0;
    for (int n = 3; n <= 8; ++n)
        for (double g : {0.05, 0.1, 0.3, 0.5}) {
            const double hc = min_gap_scan(n, g, grid).h_crossing;
            lo = std::min(lo, hc), hi = std::max(hi, hc);
            outside += hc < -2.2 || hc > -1.8;
        }
    return {outside == 0, fmt("h_crossing in [%.4f, %.4f] over 24 cases, %d outside [-2.2, -1.8]", lo, hi, outside)};
}

struct HybridRuns {
    HysteresisTrace hybrid[3];
    double tau_ratio[3];
};

const HybridRuns& hybrid_runs() {
    static HybridRuns runs = [] {
        HybridRuns r;
        for (int i = 0; i < 3; ++i) {
            const auto c = ring4(kRatios[i], 800.0);
            r.tau_ratio[i] = tau_check(c).ratio;
            r.hybrid[i] = run_protocol(c);
        }
        return r;
    }();
    return runs;
}

Outcome hybrid_area_positive() {
    const auto& r = hybrid_runs();
    bool ok = true;
    std::string d;
    for (int i = 0; i < 3; ++i) {
        ok &= !r.hybrid[i].partial;
        const double a = loop_area(r.hybrid[i]).signed_area;
        ok &= a > 0.0;
        d += fmt("%sJ/G=%.2f area %.4f (dt/tau_LZ %.1e)", i ? ", " : "", kRatios[i], a, r.tau_ratio[i]);
        ok &= r.tau_ratio[i] <= 1e-2;
    }
    return {ok, d};
}

Outcome hybrid_onset() {
    const auto& r = hybrid_runs();
    bool ok = true;
    std::string d;
    for (int i = 0; i < 3; ++i) {
        const auto on = reversal_onset(r.hybrid[i]);
        ok &= on && *on >= -2.5 && *on <= -1.5;
        d += (i ? ", " : "") + (on ? fmt("J/G=%.2f onset %.3f", kRatios[i], *on)
                                   : fmt("J/G=%.2f no onset", kRatios[i]));
    }
    return {ok, d + " (window [-2.5, -1.5])"};
}

Outcome hybrid_area_order() {
    const auto& r = hybrid_runs();
    double a[3];
    for (int i = 0; i < 3; ++i) a[i] = loop_area(r.hybrid[i]).signed_area;
    // Gamma grows from 37.4 to 2.34, so the area must shrink along that order.
    const bool ok = a[2] > a[1] && a[1] > a[0];
    return {ok, fmt("area(G=1/37.4) %.4f, area(G=1/7.87) %.4f, area(G=1/2.34) %.4f; required strictly decreasing",
                    a[2], a[1], a[0])};
}

Outcome unitary_ablation() {
    bool ok = true;
    std::string d;
    for (int i = 0; i < 3; ++i) {
        const auto t = run_protocol(ring4(kRatios[i], 800.0, HybridMode::UnitaryOnly));
        const double m = backward_end_mz(t);
        ok &= !t.partial && std::abs(m) < 0.9;
        d += fmt("%sJ/G=%.2f m_z %.3f", i ? ", " : "", kRatios[i], m);
    }
    return {ok, d};
}

Outcome non_monotonic() {
    const auto& t = hybrid_runs().hybrid[1];
    double best = 0.0, at = 0.0;
    const TraceRecord* prev = nullptr;
    for (const auto& r : t.records) {
        if (r.segment != SegmentTag::Backward) continue;
        if (prev && r.h < prev->h && r.mz - prev->mz > best) best = r.mz - prev->mz, at = r.h;
        prev = &r;
    }
    return {has_backward_upturn(t), fmt("largest rise of m_z between records %.4f at h = %.3f", best, at)};
}

Outcome kink_scaling() {
    const double gamma = 1.0 / 7.87;
    std::vector<double> x, y;
    for (double T : {80.0, 160.0, 320.0, 800.0}) {
        auto c = ring4(7.87, T);
        c.record_stride = 1;
        const auto t = run_protocol(c);
        if (t.partial) return {false, "run failed: " + t.failure};
        // Backward sweep covers 2 h_max in 2T/5.
        x.push_back(T / (5.0 * 3.0));
        y.push_back(std::log1p(-max_kink_density(t, SegmentTag::Backward)));
    }
    const auto f = linear_fit(x, y);
    const double theory = theoretical_kink_slope(gamma);
    const double ratio = f.slope / theory;
    const bool ok = f.r_squared > 0.75 && ratio > 1.0 / 3.0 && ratio < 3.0;
    return {ok, fmt("slope %.4g, R^2 %.4f, theoretical slope %.4g, ratio %.3f", f.slope, f.r_squared, theory, ratio)};
}

Outcome mfa_area_law() {
    std::vector<double> g, a;
    for (int i = 0; i < 8; ++i) {
        MfaParams p;
        p.gamma = 0.01 * std::pow(10.0, i / 7.0);
        p.drive.kind = MfaDrive::Kind::Sine;
        const auto t = run_mfa(p);
        if (t.partial) return {false, "run failed: " + t.failure};
        g.push_back(p.gamma);
        a.push_back(loop_area(t).abs_area);
    }
    const auto f = power_law_fit(g, a);
    return {f.alpha >= 1.6 && f.alpha <= 2.4,
            fmt("alpha %.3f (a %.4g, c %.4g) over gamma in [0.01, 0.1]", f.alpha, f.a, f.c)};
}

Outcome hygiene() {
    std::vector<std::string> bad;
    std::string d;
    // Norm drift over 10^4 driver steps.
    {
        auto c = ring4(7.87, 100.0, HybridMode::UnitaryOnly);
        struct Probe : HybridProbe {
            double worst = 0.0;
            long steps = 0;
            void on_state(double, const QuantumState& s) override {
                worst = std::max(worst, std::abs(s.norm() - 1.0));
                ++steps;
            }
        } probe;
        run_protocol(c, &probe);
        d += fmt("norm drift %.2e over %ld steps", probe.worst, probe.steps);
        if (!(probe.worst < 1e-8 && probe.steps >= 10000)) bad.push_back("unitarity");
    }
    // Energy at fixed field.
    {
        const auto lat = build_ring(6, 1.0);
        const auto H = build_hamiltonian(lat, 0.3, -0.8);
        const auto s = eigendecompose(H);
        std::mt19937_64 rng(5);
        std::normal_distribution<double> n;
        QuantumState psi{6, std::vector<cplx>(64)};
        for (auto& v : psi.amp) v = {n(rng), n(rng)};
        psi.normalize();
        const double e0 = observe(psi, lat, &H).energy;
        for (int i = 0; i < 10000; ++i) psi = propagate_step(psi, s, 0.01);
        const double rel = std::abs(observe(psi, lat, &H).energy - e0) / std::abs(e0);
        d += fmt(", energy drift %.2e", rel);
        if (!(rel < 1e-10)) bad.push_back("energy");
    }
    // IPF at alpha = 0.
    {
        const BasisTables tab(build_ring(5, 1.0));
        std::mt19937_64 rng(6);
        std::normal_distribution<double> n;
        QuantumState psi{5, std::vector<cplx>(32)};
        for (auto& v : psi.amp) v = {n(rng), n(rng)};
        psi.normalize();
        const auto out = ipf_apply(psi, tab, std::vector<double>(5, 0.2), tab.kink_densities(psi), 0.0, 1e-8);
        const bool same = std::memcmp(out.amp.data(), psi.amp.data(), 32 * sizeof(cplx)) == 0;
        d += same ? ", IPF(alpha=0) identical" : ", IPF(alpha=0) changed the state";
        if (!same) bad.push_back("ipf");
    }
    // Winding conservation without annihilation.
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.0, 0.5);
        KinkField k{std::vector<double>(16), std::vector<double>(16)};
        for (int a = 0; a < 16; ++a) k.n_plus[a] = u(rng), k.n_minus[a] = u(rng);
        const double w0 = k.winding();
        for (int s = 0; s < 1000; ++s) k = kinetics_step(k, std::sin(0.01 * s), 0.4, 1.0, 0.0);
        const double dw = std::abs(k.winding() - w0);
        d += fmt(", winding drift %.2e", dw);
        if (!(dw < 1e-12)) bad.push_back("kinetics");
    }
    // Bit-identical repeats.
    {
        const auto c = ring4(7.87, 100.0);
        const auto a = run_protocol(c), b = run_protocol(c);
        bool same = a.records.size() == b.records.size();
        for (std::size_t i = 0; same && i < a.records.size(); ++i)
            same = std::memcmp(&a.records[i].mz, &b.records[i].mz, sizeof(double)) == 0 &&
                   std::memcmp(&a.records[i].energy, &b.records[i].energy, sizeof(double)) == 0 &&
                   std::memcmp(&a.records[i].kink_total, &b.records[i].kink_total, sizeof(double)) == 0;
        d += same ? ", repeat bit-identical" : ", repeat differs";
        if (!same) bad.push_back("determinism");
    }
    return {bad.empty(), d};
}

Outcome analysis_oracles() {
    std::string d;
    bool ok = true;
    // Polygon traversed as a loop; shoelace is the reference.
    {
        const std::vector<std::array<double, 2>> back{{2.0, 1.0}, {1.0, 1.0}, {-1.5, 0.5}, {-2.0, -1.0}};
        const std::vector<std::array<double, 2>> fwd{{-1.0, -1.0}, {1.0, -0.5}, {2.0, 1.0}};
        HysteresisTrace t;
        auto push = [&](double h, double m, SegmentTag s) {
            TraceRecord r;
            r.t = double(t.records.size());
            r.h = h, r.mz = m, r.segment = s;
            t.records.push_back(r);
        };
        push(2.0, 1.0, SegmentTag::Ramp);
        for (auto [h, m] : back) push(h, m, SegmentTag::Backward);
        for (auto [h, m] : fwd) push(h, m, SegmentTag::Forward);
        std::vector<std::array<double, 2>> poly(back);
        poly.insert(poly.end(), fwd.begin(), fwd.end() - 1);
        double s = 0.0;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const auto &p = poly[i], &q = poly[(i + 1) % poly.size()];
            s += p[0] * q[1] - q[0] * p[1];
        }
        const double err = std::abs(loop_area(t).signed_area - 0.5 * std::abs(s));
        ok &= err < 1e-12;
        d += fmt("polygon error %.1e", err);
    }
    // Structure factor on an 8x8 lattice.
    {
        const int L = 8;
        std::vector<std::array<double, 2>> pos;
        std::vector<int> c;
        std::mt19937_64 rng(12);
        for (int y = 0; y < L; ++y)
            for (int x = 0; x < L; ++x) {
                pos.push_back({double(x), double(y)});
                c.push_back(rng() & 1 ? 1 : -1);
            }
        QGrid g;
        g.nx = g.ny = 41;
        const auto S = structure_factor({c}, pos, g);
        double worst = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                worst = std::max(worst, std::abs(S(j, i) - structure_factor_pair_sum(c, pos, g.qx(i), g.qy(j))));
        ok &= worst < 1e-9;
        d += fmt(", SSF error %.1e", worst);
    }
    // Synthetic power law.
    {
        std::vector<double> g, a;
        for (int i = 0; i < 8; ++i) {
            g.push_back(0.01 * std::pow(10.0, i / 7.0));
            a.push_back(3.0 * g.back() * g.back() + 0.5);
        }
        const auto f = power_law_fit(g, a);
        const double err = std::max({std::abs(f.a - 3.0) / 3.0, std::abs(f.alpha - 2.0), std::abs(f.c - 0.5)});
        ok &= std::abs(f.alpha - 2.0) < 1e-6 && std::abs(f.a - 3.0) < 3e-6 && std::abs(f.c - 0.5) < 1e-6;
        d += fmt(", power-law (a, alpha, c) = (%.8f, %.8f, %.8f), max error %.1e", f.a, f.alpha, f.c, err);
    }
    return {ok, d};
}

}  // namespace

int main() {
    std::printf("kernels: %s\n", kernels::active().name);
    report("1", "Hamiltonian ground truth", 1, hamiltonian_matrix);
    report("2", "LZ agreement", 30, lz_agreement);
    report("3", "Crossing location", 300, crossing_location);
    // 4a carries the cost of the three shared runs; 4 as a whole has 600 s.
    report("4a", "Hybrid loop area positive", 600, hybrid_area_positive);
    report("4b", "Hybrid reversal onset", 600, hybrid_onset);
    report("4c", "Hybrid area ordering", 600, hybrid_area_order);
    report("5", "Unitary-only ablation", 300, unitary_ablation);
    report("6", "Non-monotonic backward sweep", 60, non_monotonic);
    report("7", "Kink scaling", 1800, kink_scaling);
    report("8", "MFA area law", 300, mfa_area_law);
    report("9", "Numerical hygiene", 120, hygiene);
    report("10", "Analysis oracles", 60, analysis_oracles);
    std::printf("%d criterion line(s) failed\n", failures);
    return failures ? 1 : 0;
}
