#include "hyst/lz.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <utility>

#include "hyst/errors.hpp"

namespace hyst {

LzParams LzParams::from_tfim(double gamma, double hdot, double slope_factor) {
    const double half = 0.5 * slope_factor * hdot;
    return {gamma, half, -half};
}

double LzParams::exponent(double hbar) const {
    const double db = std::abs(b2 - b1);
    if (db == 0.0) fail(ErrorKind::Contract, "b1 == b2 has no crossing");
    return 2.0 * std::numbers::pi * a * a / (hbar * db);
}

LzProbability lz_probability(double gamma, double hdot, double hbar, bool allow_adiabatic_limit) {
    if (gamma < 0.0) fail(ErrorKind::Validation, "gamma must be >= 0");
    if (hdot == 0.0) {
        if (allow_adiabatic_limit) return {0.0, 1.0};
        fail(ErrorKind::AdiabaticLimit, "hdot = 0 is the adiabatic limit");
    }
    if (hdot < 0.0) fail(ErrorKind::Validation, "hdot must be > 0");
    const double p = std::exp(-std::numbers::pi * gamma * gamma / (2.0 * hbar * hdot));
    return {p, 1.0 - p};
}

double lz_formula(const LzParams& params, double hbar) { return std::exp(-params.exponent(hbar)); }

double lz_survival(const LzParams& P, double t_edge, double dt, double hbar, LzEnds ends) {
    using C = std::complex<double>;
    // Subtracting the mean diagonal only adds a global phase.
    const double d = 0.5 * (P.b1 - P.b2);
    const double a = P.a / hbar;
    const double k = d / hbar;
    // Lower diabatic level at -t_edge: level 1 has energy -b1 t_edge.
    const bool start_in_1 = (P.b1 * -t_edge) <= (P.b2 * -t_edge);
    // Eigenvector of [[k t, a], [a, -k t]] for the lower (sign=-1) or upper level.
    auto eigvec = [&](double t, int sign) {
        const double e = sign * std::hypot(k * t, a);
        // Either row of (H - e) gives the vector; take the better conditioned one.
        double x = a, y = e - k * t;
        if (std::abs(e + k * t) > std::abs(y)) x = e + k * t, y = a;
        const double n = std::hypot(x, y);
        return std::pair<double, double>{x / n, y / n};
    };
    C c1 = start_in_1 ? 1.0 : 0.0;
    C c2 = start_in_1 ? 0.0 : 1.0;
    if (ends == LzEnds::Adiabatic) {
        const auto [x, y] = eigvec(-t_edge, -1);
        c1 = x, c2 = y;
    }
    const C mi{0.0, -1.0};
    auto f = [&](double t, C x1, C x2, C& d1, C& d2) {
        d1 = mi * (k * t * x1 + a * x2);
        d2 = mi * (a * x1 - k * t * x2);
    };
    const long steps = static_cast<long>(std::ceil(2.0 * t_edge / dt));
    const double h = 2.0 * t_edge / static_cast<double>(steps);
    for (long n = 0; n < steps; ++n) {
        const double t = -t_edge + n * h;
        C k11, k12, k21, k22, k31, k32, k41, k42;
        f(t, c1, c2, k11, k12);
        f(t + 0.5 * h, c1 + 0.5 * h * k11, c2 + 0.5 * h * k12, k21, k22);
        f(t + 0.5 * h, c1 + 0.5 * h * k21, c2 + 0.5 * h * k22, k31, k32);
        f(t + h, c1 + h * k31, c2 + h * k32, k41, k42);
        c1 += h / 6.0 * (k11 + 2.0 * k21 + 2.0 * k31 + k41);
        c2 += h / 6.0 * (k12 + 2.0 * k22 + 2.0 * k32 + k42);
    }
    const double norm = std::norm(c1) + std::norm(c2);
    if (ends == LzEnds::Adiabatic) {
        // The level that started lowest is the upper one after the crossing.
        const auto [x, y] = eigvec(t_edge, +1);
        return std::norm(x * c1 + y * c2) / norm;
    }
    return (start_in_1 ? std::norm(c1) : std::norm(c2)) / norm;
}

LzOracleResult lz_numeric_oracle(const LzParams& P, const LzOracleOptions& opt) {
    const double db = std::abs(P.b2 - P.b1);
    if (db == 0.0) fail(ErrorKind::Contract, "b1 == b2 has no crossing");
    if (P.a == 0.0) return {1.0, opt.t_edge, 0.0, 0.0};
    const double hbar = opt.hbar;
    // Natural LZ time: the longer of the sweep time sqrt(hbar/db) and a/db.
    const double tau = std::max(std::sqrt(hbar / db), std::abs(P.a) / db);
    double T = opt.t_edge > 0.0 ? opt.t_edge : 20.0 * tau;
    auto run = [&](double t_edge, double& dt) {
        const double emax = std::hypot(0.5 * db * t_edge, P.a);
        dt = opt.phase_step * hbar / emax;
        return lz_survival(P, t_edge, dt, hbar, opt.ends);
    };
    double dt = 0.0;
    double p = run(T, dt);
    for (int i = 0; i < opt.max_doublings; ++i) {
        double dt2 = 0.0;
        const double p2 = run(2.0 * T, dt2);
        const double change = std::abs(p2 - p);
        if (change < opt.tolerance) return {p2, 2.0 * T, dt2, change};
        T *= 2.0;
        p = p2;
        dt = dt2;
    }
    std::ostringstream os;
    os << "survival probability not converged at t_edge=" << T;
    fail(ErrorKind::NonConverged, os.str());
}

}  // namespace hyst
