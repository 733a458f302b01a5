#include "hyst/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "hyst/errors.hpp"
#include "hyst/kernels.hpp"

namespace hyst {

namespace {

double trapz_mdh(const std::vector<const TraceRecord*>& rs) {
    double s = 0.0;
    for (std::size_t i = 1; i < rs.size(); ++i)
        s += 0.5 * (rs[i]->mz + rs[i - 1]->mz) * (rs[i]->h - rs[i - 1]->h);
    return s;
}

}  // namespace

LoopArea loop_area(const HysteresisTrace& trace) {
    // Integrate the closed path: backward then forward, joined through the
    // turning points so the path has no gaps.
    std::vector<const TraceRecord*> path;
    bool saw_b = false, saw_f = false;
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const auto& r = trace.records[i];
        if (r.segment == SegmentTag::Ramp) {
            // The last ramp sample is the start of the backward branch.
            if (i + 1 < trace.records.size() && trace.records[i + 1].segment != SegmentTag::Ramp) path.push_back(&r);
            continue;
        }
        saw_b |= r.segment == SegmentTag::Backward;
        saw_f |= r.segment == SegmentTag::Forward;
        path.push_back(&r);
    }
    if (!saw_b || !saw_f) fail(ErrorKind::IncompleteLoop, "trace needs both backward and forward segments");
    const double oint = trapz_mdh(path);
    return {-oint, std::abs(oint)};
}

double max_kink_density(const HysteresisTrace& trace, SegmentTag segment) {
    double best = -1.0;
    for (const auto& r : trace.records)
        if (r.segment == segment) best = std::max(best, r.kink_total);
    if (best < 0.0) fail(ErrorKind::IncompleteLoop, std::string("segment '") + segment_name(segment) + "' absent");
    return best;
}

std::optional<double> reversal_onset(const HysteresisTrace& trace, double threshold) {
    for (const auto& r : trace.records)
        if (r.segment == SegmentTag::Backward && r.mz < threshold) return r.h;
    return std::nullopt;
}

bool has_backward_upturn(const HysteresisTrace& trace, double tol) {
    const TraceRecord* prev = nullptr;
    for (const auto& r : trace.records) {
        if (r.segment != SegmentTag::Backward) continue;
        if (prev && r.h < prev->h && r.mz > prev->mz + tol) return true;
        prev = &r;
    }
    return false;
}

FitResult linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) fail(ErrorKind::Validation, "xs and ys lengths differ");
    const std::size_t n = xs.size();
    if (n < 3) fail(ErrorKind::InsufficientData, "linear_fit needs at least 3 points");
    // Sort by (x, y) so the sums do not depend on input order.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return xs[a] != xs[b] ? xs[a] < xs[b] : ys[a] < ys[b];
    });
    double mx = 0.0, my = 0.0;
    for (auto i : idx) mx += xs[i], my += ys[i];
    mx /= double(n), my /= double(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (auto i : idx) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx, sxy += dx * dy, syy += dy * dy;
    }
    if (sxx == 0.0) fail(ErrorKind::Rank, "all x values are equal");
    FitResult f;
    f.n_points = static_cast<int>(n);
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssr = 0.0;
    for (auto i : idx) {
        const double e = ys[i] - (f.slope * xs[i] + f.intercept);
        ssr += e * e;
    }
    if (syy == 0.0) {
        f.r_squared = ssr == 0.0 ? 1.0 : 0.0;
    } else {
        f.r_squared = std::clamp(1.0 - ssr / syy, 0.0, 1.0);
        // Collinear data up to rounding.
        if (ssr <= 1e-24 * syy) f.r_squared = 1.0;
    }
    return f;
}

namespace {

struct AcFit {
    double a, c, sse;
};

AcFit fit_ac(const std::vector<double>& g, const std::vector<double>& A, double alpha) {
    const std::size_t n = g.size();
    std::vector<double> x(n);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::pow(g[i], alpha);
        mx += x[i], my += A[i];
    }
    mx /= double(n), my /= double(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) sxx += (x[i] - mx) * (x[i] - mx), sxy += (x[i] - mx) * (A[i] - my);
    const double a = sxx > 0.0 ? sxy / sxx : 0.0;
    const double c = my - a * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = A[i] - (a * x[i] + c);
        sse += e * e;
    }
    return {a, c, sse};
}

}  // namespace

PowerLawFit power_law_fit(const std::vector<double>& gammas, const std::vector<double>& areas,
                          double alpha_min, double alpha_max) {
    if (gammas.size() != areas.size()) fail(ErrorKind::Validation, "gammas and areas lengths differ");
    if (gammas.size() < 4) fail(ErrorKind::InsufficientData, "power_law_fit needs at least 4 points");
    // Canonical order keeps the fit permutation invariant.
    std::vector<std::size_t> idx(gammas.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return gammas[a] < gammas[b]; });
    std::vector<double> g, A;
    for (auto i : idx) g.push_back(gammas[i]), A.push_back(areas[i]);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!(g[i] > 0.0)) fail(ErrorKind::Validation, "gammas must be positive");
        if (i > 0 && g[i] == g[i - 1]) fail(ErrorKind::Validation, "gammas must be distinct");
    }
    const int n = 351;
    int best = 0;
    double best_sse = INFINITY;
    std::vector<double> grid(n);
    for (int k = 0; k < n; ++k) {
        grid[k] = alpha_min + (alpha_max - alpha_min) * k / (n - 1);
        const double s = fit_ac(g, A, grid[k]).sse;
        if (s < best_sse) best_sse = s, best = k;
    }
    double lo = grid[std::max(0, best - 1)], hi = grid[std::min(n - 1, best + 1)];
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = fit_ac(g, A, x1).sse, f2 = fit_ac(g, A, x2).sse;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        if (f1 < f2) {
            hi = x2, x2 = x1, f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = fit_ac(g, A, x1).sse;
        } else {
            lo = x1, x1 = x2, f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = fit_ac(g, A, x2).sse;
        }
    }
    double alpha = 0.5 * (lo + hi);
    AcFit fit = fit_ac(g, A, alpha);
    if (best_sse < fit.sse) alpha = grid[best], fit = fit_ac(g, A, alpha);
    return {fit.a, alpha, fit.c, fit.sse};
}

double theoretical_kink_slope(double gamma, double hbar) { return -12.5 * gamma * gamma / hbar; }

double SampleEntry::magnetization() const {
    if (configs.empty()) return 0.0;
    double s = 0.0;
    for (const auto& c : configs)
        for (int v : c) s += v;
    return s / double(configs.size() * configs.front().size());
}

void SampleSet::validate() const {
    std::size_t len = 0;
    for (const auto& e : entries)
        for (const auto& c : e.configs) {
            if (len == 0) len = c.size();
            if (c.size() != len) fail(ErrorKind::Validation, "sample configurations differ in length");
            for (int v : c)
                if (v != 1 && v != -1) fail(ErrorKind::Validation, "configuration entries must be +1 or -1");
        }
}

std::vector<std::uint64_t> sample_indices(const QuantumState& state, std::size_t count, std::uint64_t seed) {
    if (count < 1) fail(ErrorKind::Validation, "sample count must be >= 1");
    const std::size_t D = state.dim();
    std::vector<double> p(D), cdf(D);
    kernels::scalar().abs2(state.amp.data(), p.data(), D);
    std::partial_sum(p.begin(), p.end(), cdf.begin());
    const double total = cdf.back();
    if (!(total > 0.0)) fail(ErrorKind::Validation, "state has zero norm");
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> out(count);
    for (auto& o : out) {
        // 53 random bits -> uniform in [0, 1).
        const double u = double(rng() >> 11) * 0x1.0p-53 * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t i = std::min<std::size_t>(it - cdf.begin(), D - 1);
        while (p[i] == 0.0 && i > 0) --i;  // never land on an empty state
        o = i;
    }
    return out;
}

SampleEntry sample_configurations(const QuantumState& state, std::size_t count, std::uint64_t seed,
                                  const std::vector<int>& readout_sign) {
    const int N = state.n_spins;
    SampleEntry e;
    for (auto i : sample_indices(state, count, seed)) {
        std::vector<int> c(N);
        for (int k = 0; k < N; ++k) c[k] = spin_of(i, k, N) * (readout_sign.empty() ? 1 : readout_sign[k]);
        e.configs.push_back(std::move(c));
    }
    return e;
}

double QGrid::qx(int i) const { return nx == 1 ? qmin : qmin + (qmax - qmin) * i / double(nx - 1); }
double QGrid::qy(int j) const { return ny == 1 ? qmin : qmin + (qmax - qmin) * j / double(ny - 1); }

Eigen::MatrixXd structure_factor(const std::vector<std::vector<int>>& configs,
                                 const std::vector<std::array<double, 2>>& positions, const QGrid& grid) {
    if (configs.empty()) fail(ErrorKind::Validation, "no configurations");
    if (grid.nx < 1 || grid.ny < 1) fail(ErrorKind::Validation, "q grid must have at least one point per axis");
    const std::size_t N = positions.size();
    for (const auto& c : configs)
        if (c.size() != N) fail(ErrorKind::Validation, "configuration length differs from positions");
    const auto& K = kernels::active();
    using C = std::complex<double>;
    // exp(i q.r) factorises into an x table and a y table.
    std::vector<C> ex(grid.nx * N), ey(grid.ny * N);
    for (int i = 0; i < grid.nx; ++i)
        for (std::size_t s = 0; s < N; ++s) ex[i * N + s] = std::polar(1.0, grid.qx(i) * positions[s][0]);
    for (int j = 0; j < grid.ny; ++j)
        for (std::size_t s = 0; s < N; ++s) ey[j * N + s] = std::polar(1.0, grid.qy(j) * positions[s][1]);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(grid.ny, grid.nx);
    std::vector<C> w(N);
    for (const auto& c : configs) {
        for (int j = 0; j < grid.ny; ++j) {
            for (std::size_t s = 0; s < N; ++s) w[s] = double(c[s]) * ey[j * N + s];
            for (int i = 0; i < grid.nx; ++i) out(j, i) += std::norm(K.cdotu(w.data(), &ex[i * N], N));
        }
    }
    return out / double(configs.size());
}

double structure_factor_pair_sum(const std::vector<int>& config,
                                 const std::vector<std::array<double, 2>>& positions, double qx, double qy) {
    std::complex<double> s{0.0, 0.0};
    for (std::size_t i = 0; i < config.size(); ++i)
        for (std::size_t j = 0; j < config.size(); ++j) {
            const double ph = qx * (positions[i][0] - positions[j][0]) + qy * (positions[i][1] - positions[j][1]);
            s += std::polar(double(config[i] * config[j]), ph);
        }
    return std::abs(s);
}

}  // namespace hyst
