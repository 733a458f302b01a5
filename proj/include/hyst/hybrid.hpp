#pragma once

#include <cstdint>
#include <vector>

#include "hyst/drive.hpp"
#include "hyst/lattice.hpp"
#include "hyst/quantum.hpp"
#include "hyst/trace.hpp"

namespace hyst {

// Per-bond densities of (up,down) and (down,up) domain walls, bond spacing 1.
struct KinkField {
    std::vector<double> n_plus;
    std::vector<double> n_minus;

    std::vector<double> total() const;
    double winding() const;  // sum(n_plus - n_minus)
};

// One explicit-Euler upwind step of
//   d n+/dt = -v0 h dn+/dx - omega n+ n-,   d n-/dt = +v0 h dn-/dx - omega n+ n-
// on a periodic bond ring. Throws Stability when |v0 h| dt > 1.
KinkField kinetics_step(const KinkField& kinks, double h, double dt, double v0, double omega);

// alpha = alpha0 + kappa / (2 n_bonds) * sum |target - measured|.
double ipf_alpha(const std::vector<double>& target, const std::vector<double>& measured,
                 double alpha0, double kappa);

// psi_i <- psi_i prod_a (max(t_a,eps) / max(m_a,eps))^(alpha n_a^i), then
// renormalised. target and measured are per-bond total kink densities.
QuantumState ipf_apply(const QuantumState& state, const BasisTables& tables,
                       const std::vector<double>& target, const std::vector<double>& measured,
                       double alpha, double epsilon_floor);

QuantumState ipf_update(const QuantumState& state, const BasisTables& tables,
                        const std::vector<double>& target, const std::vector<double>& measured,
                        double alpha0, double kappa, double epsilon_floor);

enum class HybridMode { Hybrid, UnitaryOnly };
enum class FreezePoint { Left, Midpoint };

struct HybridConfig {
    LatticeSpec lattice;
    DriveProtocol drive;
    double gamma = 0.1;
    double hbar = 1.0;
    double dt = 0.01;
    int k_sc = 1;
    double v0 = 1.0;
    double omega = 0.1;
    double alpha0 = 0.05;
    double kappa = 0.5;
    double epsilon_floor = 1e-8;
    double gamma_sync = 0.1;
    HybridMode mode = HybridMode::Hybrid;
    FreezePoint freeze = FreezePoint::Left;
    int record_stride = 10;
    bool record_populations = false;
    double tau_warn = 1e-2;
    double tau_abort = 1e-1;
    int max_spins = kDefaultMaxSpins;
    std::uint64_t seed = 0;

    void validate() const;
};

// Smallest aligned/single-flip gap over the swept field range, and the
// resulting dt / tau_LZ with tau_LZ = gap / max|hdot|.
struct TauCheck {
    double min_gap;
    double tau_lz;
    double ratio;
};
TauCheck tau_check(const HybridConfig& config);

// Starts in the aligned state and interleaves frozen-H propagation with
// kink kinetics and the IPF coupler. Stepping failures return the trace so
// far with partial = true.
HysteresisTrace run_protocol(const HybridConfig& config);

// Observer hook for each coupling step, used by tests and diagnostics.
struct HybridProbe {
    virtual ~HybridProbe() = default;
    virtual void on_state(double t, const QuantumState& state) { (void)t, (void)state; }
};
HysteresisTrace run_protocol(const HybridConfig& config, HybridProbe* probe);

}  // namespace hyst
