#include "hyst/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hyst/errors.hpp"
#include "hyst/kernels.hpp"

namespace hyst {

QuantumState QuantumState::basis(int n_spins, std::uint64_t index) {
    if (n_spins < 1 || n_spins > 62) fail(ErrorKind::Capacity, "unsupported spin count");
    QuantumState s;
    s.n_spins = n_spins;
    s.amp.assign(std::size_t{1} << n_spins, cplx{0.0, 0.0});
    if (index >= s.amp.size()) fail(ErrorKind::OutOfRange, "basis index out of range");
    s.amp[index] = 1.0;
    return s;
}

double QuantumState::norm() const {
    std::vector<double> p(amp.size());
    kernels::active().abs2(amp.data(), p.data(), amp.size());
    double s = 0.0;
    for (double v : p) s += v;
    return std::sqrt(s);
}

void QuantumState::normalize() {
    const double n = norm();
    if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorKind::Collapse, "state cannot be normalized");
    for (auto& a : amp) a /= n;
}

std::uint64_t aligned_index(const LatticeSpec& lattice) {
    std::uint64_t idx = 0;
    for (int k = 0; k < lattice.n_spins; ++k)
        if (lattice.readout_sign[k] < 0) idx |= site_mask(k, lattice.n_spins);
    return idx;
}

HermitianOperator build_hamiltonian(const LatticeSpec& lattice, double gamma, double h,
                                    int max_spins) {
    const int N = lattice.n_spins;
    if (N > max_spins) {
        std::ostringstream os;
        os << "n_spins=" << N << " exceeds configured maximum " << max_spins;
        fail(ErrorKind::Capacity, os.str());
    }
    const std::size_t D = std::size_t{1} << N;
    HermitianOperator H;
    H.m = Eigen::MatrixXcd::Zero(D, D);
    for (std::size_t i = 0; i < D; ++i) {
        double e = 0.0;
        for (const auto& bd : lattice.bonds)
            e -= bd.J * spin_of(i, bd.a, N) * spin_of(i, bd.b, N);
        for (int k = 0; k < N; ++k) e -= h * lattice.local_fields[k] * spin_of(i, k, N);
        H.m(i, i) = e;
        if (gamma != 0.0)
            for (int k = 0; k < N; ++k) H.m(i, i ^ site_mask(k, N)) = -gamma;
    }
    return H;
}

Spectrum eigendecompose(const HermitianOperator& H) {
    const auto& M = H.m;
    if (M.rows() != M.cols()) fail(ErrorKind::Contract, "operator is not square");
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if ((M - M.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        fail(ErrorKind::Contract, "operator is not Hermitian");
    Spectrum S;
    if (M.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.real());
        if (es.info() != Eigen::Success) fail(ErrorKind::NonConverged, "eigensolver failed");
        S.energies = es.eigenvalues();
        S.vectors = es.eigenvectors().cast<cplx>();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M);
        if (es.info() != Eigen::Success) fail(ErrorKind::NonConverged, "eigensolver failed");
        S.energies = es.eigenvalues();
        S.vectors = es.eigenvectors();
    }
    return S;
}

QuantumState propagate_step(const QuantumState& state, const Spectrum& spectrum, double dt,
                            double hbar) {
    if (!(dt > 0.0)) fail(ErrorKind::Contract, "propagate_step needs dt > 0");
    const auto& K = kernels::active();
    const std::size_t D = state.dim();
    if (static_cast<std::size_t>(spectrum.vectors.rows()) != D)
        fail(ErrorKind::Contract, "spectrum dimension differs from state");
    std::vector<cplx> c(D), phase(D);
    for (std::size_t k = 0; k < D; ++k) {
        c[k] = K.cdotc(spectrum.vectors.col(k).data(), state.amp.data(), D);
        const double th = -spectrum.energies[k] * dt / hbar;
        phase[k] = {std::cos(th), std::sin(th)};
    }
    K.cmul(phase.data(), c.data(), D);
    QuantumState out;
    out.n_spins = state.n_spins;
    out.amp.assign(D, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < D; ++k) K.caxpy(c[k], spectrum.vectors.col(k).data(), out.amp.data(), D);
    return out;
}

std::vector<double> Observables::kinks() const {
    std::vector<double> k(kinks_plus.size());
    for (std::size_t a = 0; a < k.size(); ++a) k[a] = kinks_plus[a] + kinks_minus[a];
    return k;
}

BasisTables::BasisTables(const LatticeSpec& lattice) : lattice_(lattice) {
    lattice_.validate();
    const int N = lattice_.n_spins;
    if (N > 30) fail(ErrorKind::Capacity, "basis tables limited to 30 spins");
    dim_ = std::size_t{1} << N;
    mz_.assign(dim_, 0.0);
    const std::size_t nb = lattice_.bonds.size();
    plus_.assign(nb, std::vector<double>(dim_, 0.0));
    minus_.assign(nb, std::vector<double>(dim_, 0.0));
    any_.assign(nb, std::vector<double>(dim_, 0.0));
    for (std::size_t i = 0; i < dim_; ++i) {
        double m = 0.0;
        for (int k = 0; k < N; ++k) m += lattice_.readout_sign[k] * spin_of(i, k, N);
        mz_[i] = m / N;
        for (std::size_t a = 0; a < nb; ++a) {
            const auto& bd = lattice_.bonds[a];
            const int sa = lattice_.readout_sign[bd.a] * spin_of(i, bd.a, N);
            const int sb = lattice_.readout_sign[bd.b] * spin_of(i, bd.b, N);
            if (sa > 0 && sb < 0) plus_[a][i] = 1.0;
            if (sa < 0 && sb > 0) minus_[a][i] = 1.0;
            any_[a][i] = plus_[a][i] + minus_[a][i];
        }
    }
}

Observables BasisTables::observe(const QuantumState& state, const HermitianOperator* H) const {
    if (state.dim() != dim_) fail(ErrorKind::Contract, "state dimension differs from lattice");
    const auto& K = kernels::active();
    const int N = lattice_.n_spins;
    std::vector<double> p(dim_);
    K.abs2(state.amp.data(), p.data(), dim_);

    Observables o;
    o.mz = K.ddot(p.data(), mz_.data(), dim_);
    const std::size_t nb = n_bonds();
    o.kinks_plus.resize(nb);
    o.kinks_minus.resize(nb);
    for (std::size_t a = 0; a < nb; ++a) {
        o.kinks_plus[a] = K.ddot(p.data(), plus_[a].data(), dim_);
        o.kinks_minus[a] = K.ddot(p.data(), minus_[a].data(), dim_);
        o.nplus_sum += o.kinks_plus[a];
        o.nminus_sum += o.kinks_minus[a];
    }
    o.kink_total = nb ? (o.nplus_sum + o.nminus_sum) / double(nb) : 0.0;

    // sx flips a site; sy picks up +-i. A gauge flip on site k maps sy -> -sy.
    double sx = 0.0, sy = 0.0;
    for (int k = 0; k < N; ++k) {
        const std::uint64_t mask = site_mask(k, N);
        double xk = 0.0, yk = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            if (i & mask) continue;
            const cplx z = std::conj(state.amp[i]) * state.amp[i | mask];
            xk += 2.0 * z.real();
            yk += 2.0 * z.imag();
        }
        sx += xk;
        sy += lattice_.readout_sign[k] * yk;
    }
    o.mx = sx / N;
    o.my = sy / N;

    if (H) {
        Eigen::Map<const Eigen::VectorXcd> psi(state.amp.data(), dim_);
        o.energy = psi.dot(H->m * psi).real();
    }
    return o;
}

std::vector<double> BasisTables::kink_densities(const QuantumState& state) const {
    const auto& K = kernels::active();
    std::vector<double> p(dim_);
    K.abs2(state.amp.data(), p.data(), dim_);
    std::vector<double> n(n_bonds());
    for (std::size_t a = 0; a < n.size(); ++a) n[a] = K.ddot(p.data(), any_[a].data(), dim_);
    return n;
}

Observables observe(const QuantumState& state, const LatticeSpec& lattice, const HermitianOperator* H) {
    return BasisTables(lattice).observe(state, H);
}

AdiabaticPopulations adiabatic_populations(const QuantumState& state, const Spectrum& spectrum) {
    const auto& K = kernels::active();
    const std::size_t D = state.dim();
    AdiabaticPopulations out;
    out.populations.resize(D);
    for (std::size_t k = 0; k < D; ++k) {
        const cplx c = K.cdotc(spectrum.vectors.col(k).data(), state.amp.data(), D);
        out.populations[k] = std::norm(c);
        out.mean_energy += out.populations[k] * spectrum.energies[k];
    }
    return out;
}

double aligned_flip_gap(const LatticeSpec& lattice, double gamma, double h) {
    const int N = lattice.n_spins;
    const Spectrum S = eigendecompose(build_hamiltonian(lattice, gamma, h));
    const std::uint64_t up = aligned_index(lattice);
    const auto D = S.vectors.rows();
    Eigen::Index ia = 0;
    double best = -1.0;
    for (Eigen::Index k = 0; k < D; ++k) {
        const double w = std::norm(S.vectors(up, k));
        if (w > best) best = w, ia = k;
    }
    Eigen::Index ib = -1;
    best = -1.0;
    for (Eigen::Index k = 0; k < D; ++k) {
        if (k == ia) continue;
        cplx w{0.0, 0.0};
        for (int s = 0; s < N; ++s) w += S.vectors(up ^ site_mask(s, N), k);
        const double ov = std::norm(w) / N;
        if (ov > best) best = ov, ib = k;
    }
    return std::abs(S.energies[ib] - S.energies[ia]);
}

CrossingScan min_gap_scan(const LatticeSpec& lattice, double gamma, const std::vector<double>& h_grid) {
    if (h_grid.size() < 3) fail(ErrorKind::Inconclusive, "h grid needs at least 3 points");
    std::vector<double> g(h_grid.size());
    for (std::size_t i = 0; i < h_grid.size(); ++i) g[i] = aligned_flip_gap(lattice, gamma, h_grid[i]);
    const auto it = std::min_element(g.begin(), g.end());
    const std::size_t i = static_cast<std::size_t>(it - g.begin());
    if (i == 0 || i + 1 == g.size()) {
        std::ostringstream os;
        os << "gap minimum sits on the grid edge at h=" << h_grid[i] << "; widen or refine the grid";
        fail(ErrorKind::Inconclusive, os.str());
    }
    // Golden-section refinement inside the bracketing cells.
    double a = h_grid[i - 1], b = h_grid[i + 1];
    if (a > b) std::swap(a, b);
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = aligned_flip_gap(lattice, gamma, x1), f2 = aligned_flip_gap(lattice, gamma, x2);
    while (b - a > 1e-9 * std::max(1.0, std::abs(a))) {
        if (f1 < f2) {
            b = x2, x2 = x1, f2 = f1;
            x1 = b - r * (b - a);
            f1 = aligned_flip_gap(lattice, gamma, x1);
        } else {
            a = x1, x1 = x2, f1 = f2;
            x2 = a + r * (b - a);
            f2 = aligned_flip_gap(lattice, gamma, x2);
        }
    }
    CrossingScan out{0.5 * (a + b), 0.0};
    out.gap = aligned_flip_gap(lattice, gamma, out.h_crossing);
    if (*it < out.gap) out = {h_grid[i], *it};
    return out;
}

CrossingScan min_gap_scan(int n, double gamma, const std::vector<double>& h_grid) {
    return min_gap_scan(build_ring(n, 1.0), gamma, h_grid);
}

}  // namespace hyst
