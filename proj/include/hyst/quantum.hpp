#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hyst/lattice.hpp"

namespace hyst {

using cplx = std::complex<double>;

// Amplitudes over the sigma^z product basis. Site 0 is the most significant
// bit and bit value 0 means spin up (+1).
struct QuantumState {
    int n_spins = 0;
    std::vector<cplx> amp;

    static QuantumState basis(int n_spins, std::uint64_t index);
    std::size_t dim() const { return amp.size(); }
    double norm() const;
    void normalize();
};

inline int spin_of(std::uint64_t basis, int site, int n_spins) {
    return ((basis >> (n_spins - 1 - site)) & 1u) ? -1 : 1;
}
inline std::uint64_t site_mask(int site, int n_spins) {
    return std::uint64_t{1} << (n_spins - 1 - site);
}

// Basis index whose readout-corrected spins are all up.
std::uint64_t aligned_index(const LatticeSpec& lattice);

struct HermitianOperator {
    Eigen::MatrixXcd m;
};

struct Spectrum {
    Eigen::VectorXd energies;  // ascending
    Eigen::MatrixXcd vectors;  // columns are eigenvectors
};

inline constexpr int kDefaultMaxSpins = 14;

// H = -sum J_ab sz_a sz_b - gamma sum sx_i - h sum h_i sz_i.
HermitianOperator build_hamiltonian(const LatticeSpec& lattice, double gamma, double h,
                                    int max_spins = kDefaultMaxSpins);

Spectrum eigendecompose(const HermitianOperator& H);

// psi <- V exp(-i E dt / hbar) V^dagger psi.
QuantumState propagate_step(const QuantumState& state, const Spectrum& spectrum, double dt,
                            double hbar = 1.0);

struct Observables {
    double mx = 0.0, my = 0.0, mz = 0.0;
    double energy = 0.0;
    std::vector<double> kinks_plus;
    std::vector<double> kinks_minus;
    double nplus_sum = 0.0;
    double nminus_sum = 0.0;
    double kink_total = 0.0;  // mean per-bond density

    std::vector<double> kinks() const;  // per-bond n+ + n-
};

// Per-basis lookup tables for one lattice: corrected magnetization and
// oriented kink indicators. Kinks are read on readout-corrected spins so a
// gauged ring reports the same kinks as its ferromagnetic partner.
class BasisTables {
public:
    explicit BasisTables(const LatticeSpec& lattice);

    const LatticeSpec& lattice() const { return lattice_; }
    std::size_t dim() const { return dim_; }
    std::size_t n_bonds() const { return lattice_.bonds.size(); }
    const std::vector<double>& kink_plus(std::size_t bond) const { return plus_[bond]; }
    const std::vector<double>& kink_minus(std::size_t bond) const { return minus_[bond]; }
    const std::vector<double>& kink_any(std::size_t bond) const { return any_[bond]; }
    const std::vector<double>& mz_table() const { return mz_; }

    // Energy is <H> when H is supplied, else 0.
    Observables observe(const QuantumState& state, const HermitianOperator* H = nullptr) const;
    // Per-bond total kink expectations only.
    std::vector<double> kink_densities(const QuantumState& state) const;

private:
    LatticeSpec lattice_;
    std::size_t dim_;
    std::vector<double> mz_;
    std::vector<std::vector<double>> plus_, minus_, any_;
};

Observables observe(const QuantumState& state, const LatticeSpec& lattice,
                    const HermitianOperator* H = nullptr);

struct AdiabaticPopulations {
    std::vector<double> populations;
    double mean_energy = 0.0;
};

AdiabaticPopulations adiabatic_populations(const QuantumState& state, const Spectrum& spectrum);

// Gap between the eigenbranch overlapping most with the aligned state and
// the branch overlapping most with the symmetric single-flip state.
double aligned_flip_gap(const LatticeSpec& lattice, double gamma, double h);

struct CrossingScan {
    double h_crossing;
    double gap;
};

CrossingScan min_gap_scan(const LatticeSpec& lattice, double gamma, const std::vector<double>& h_grid);
CrossingScan min_gap_scan(int n, double gamma, const std::vector<double>& h_grid);

}  // namespace hyst
