#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyst/quantum.hpp"
#include "hyst/trace.hpp"

namespace hyst {

struct LoopArea {
    double signed_area;    // positive when the backward branch lies above the forward one
    double abs_area;
};

// Closed backward + forward path integral of m_z dh (trapezoidal), ramp
// excluded. signed_area = -oint m_z dh.
LoopArea loop_area(const HysteresisTrace& trace);

double max_kink_density(const HysteresisTrace& trace, SegmentTag segment);

// First h on the backward branch where m_z drops below the threshold.
std::optional<double> reversal_onset(const HysteresisTrace& trace, double threshold = 0.9);

// True when m_z rises by more than tol between consecutive backward records.
bool has_backward_upturn(const HysteresisTrace& trace, double tol = 1e-3);

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int n_points = 0;
};

// Ordinary least squares. R^2 is 1 when the targets have zero variance
// and the residual is zero.
FitResult linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

struct PowerLawFit {
    double a = 0.0;
    double alpha = 0.0;
    double c = 0.0;
    double residual = 0.0;
};

// A = a Gamma^alpha + c: alpha grid on [alpha_min, alpha_max] refined by
// golden section, (a, c) by linear least squares at each alpha.
PowerLawFit power_law_fit(const std::vector<double>& gammas, const std::vector<double>& areas,
                          double alpha_min = 0.5, double alpha_max = 4.0);

// Kink-scaling pipeline: points (1/hdot, ln(1 - n_d)).
struct KinkScaling {
    std::vector<double> inv_hdot;
    std::vector<double> log_one_minus_nd;
    FitResult fit;
    double theoretical_slope;
};

// Natural-unit form of [A Gamma']^2 5T / (hbar B 4 |h'_max|) per unit
// 1/hdot, i.e. -25 gamma^2 / (2 hbar); negative because ln(1 - n_d) <= 0.
double theoretical_kink_slope(double gamma, double hbar = 1.0);

// Spin configurations at one drive point. Each configuration holds +1/-1.
struct SampleEntry {
    double h = 0.0;
    SegmentTag segment = SegmentTag::Backward;
    std::vector<std::vector<int>> configs;
    double magnetization() const;
};

struct SampleSet {
    std::vector<SampleEntry> entries;
    void validate() const;
};

// Basis indices drawn with probability |psi_i|^2 from a 64-bit Mersenne
// twister seeded with `seed`.
std::vector<std::uint64_t> sample_indices(const QuantumState& state, std::size_t count, std::uint64_t seed);
SampleEntry sample_configurations(const QuantumState& state, std::size_t count, std::uint64_t seed,
                                  const std::vector<int>& readout_sign = {});

struct QGrid {
    int nx = 200;
    int ny = 200;
    double qmin = -2.0 * 3.14159265358979323846;
    double qmax = 2.0 * 3.14159265358979323846;
    double qx(int i) const;
    double qy(int j) const;
};

// Mean over configurations of |S(q)|, S(q) = |sum_j s_j exp(i q.r_j)|^2.
// Row j, column i holds q = (qx(i), qy(j)).
Eigen::MatrixXd structure_factor(const std::vector<std::vector<int>>& configs,
                                 const std::vector<std::array<double, 2>>& positions,
                                 const QGrid& grid = {});

// Direct double sum over site pairs, the reference for the fast path.
double structure_factor_pair_sum(const std::vector<int>& config,
                                 const std::vector<std::array<double, 2>>& positions, double qx, double qy);

}  // namespace hyst
