#pragma once

namespace hyst {

// Two-level crossing H(t) = [[b1 t, a], [a, b2 t]].
struct LzParams {
    double a = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;

    // Spin flip against aligned neighbours: a = gamma and |b2 - b1| =
    // slope_factor * hdot. A factor of 4 reproduces exp(-pi gamma^2 / (2 hbar hdot)).
    static LzParams from_tfim(double gamma, double hdot, double slope_factor = 4.0);
    double exponent(double hbar = 1.0) const;  // 2 pi a^2 / (hbar |b2 - b1|)
};

struct LzProbability {
    double p;  // diabatic passage
    double q;  // 1 - p
};

// p = exp(-pi gamma^2 / (2 hbar hdot)). hdot = 0 throws unless the caller
// opts into the adiabatic-limit convention p = 0.
LzProbability lz_probability(double gamma, double hdot, double hbar = 1.0,
                             bool allow_adiabatic_limit = false);

// p = exp(-2 pi a^2 / (hbar |b2 - b1|)).
double lz_formula(const LzParams& params, double hbar = 1.0);

// How the span edges are read. Diabatic reads the bare levels at +-t_edge,
// which carry an O(1/t_edge) oscillation. Adiabatic starts in the
// instantaneous eigenvector that tends to the lower diabatic level and reads
// the eigenvector that continues that level; the two agree as t_edge grows
// but the adiabatic reading converges as O(1/t_edge^2).
enum class LzEnds { Adiabatic, Diabatic };

struct LzOracleOptions {
    double t_edge = 0.0;       // 0 picks a span from the parameters
    double phase_step = 0.05;  // dt * max|E| / hbar
    double tolerance = 1e-3;   // allowed change when t_edge doubles
    double hbar = 1.0;
    int max_doublings = 6;
    LzEnds ends = LzEnds::Adiabatic;
};

struct LzOracleResult {
    double p;
    double t_edge;
    double dt;
    double change;  // |p(2 t_edge) - p(t_edge)|
};

// Fixed-step RK4 integration of the two-level Schrodinger equation from the
// lower diabatic state at -t_edge; returns the diabatic survival at +t_edge.
// The span is doubled until the survival moves by less than the tolerance.
LzOracleResult lz_numeric_oracle(const LzParams& params, const LzOracleOptions& options = {});

// Single fixed run without the convergence loop.
double lz_survival(const LzParams& params, double t_edge, double dt, double hbar = 1.0,
                   LzEnds ends = LzEnds::Adiabatic);

}  // namespace hyst
