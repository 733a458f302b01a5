#include "hyst/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "hyst/errors.hpp"
#include "hyst/kernels.hpp"

namespace hyst {

std::vector<double> KinkField::total() const {
    std::vector<double> t(n_plus.size());
    for (std::size_t a = 0; a < t.size(); ++a) t[a] = n_plus[a] + n_minus[a];
    return t;
}

double KinkField::winding() const {
    double w = 0.0;
    for (std::size_t a = 0; a < n_plus.size(); ++a) w += n_plus[a] - n_minus[a];
    return w;
}

KinkField kinetics_step(const KinkField& k, double h, double dt, double v0, double omega) {
    const std::size_t M = k.n_plus.size();
    if (k.n_minus.size() != M) fail(ErrorKind::Contract, "n_plus and n_minus lengths differ");
    const double u = v0 * h;  // velocity of n+, n- moves at -u
    const double cfl = std::abs(u) * dt;
    if (cfl > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "CFL ratio |v0 h| dt = " << cfl << " exceeds 1";
        fail(ErrorKind::Stability, os.str());
    }
    KinkField out{std::vector<double>(M), std::vector<double>(M)};
    const auto& p = k.n_plus;
    const auto& m = k.n_minus;
    for (std::size_t j = 0; j < M; ++j) {
        const std::size_t l = (j + M - 1) % M, r = (j + 1) % M;
        // Upwind differences: information comes from the side the flow leaves.
        const double adv_p = u >= 0.0 ? u * (p[j] - p[l]) : u * (p[r] - p[j]);
        const double adv_m = -u >= 0.0 ? -u * (m[j] - m[l]) : -u * (m[r] - m[j]);
        const double ann = omega * p[j] * m[j];
        out.n_plus[j] = std::clamp(p[j] - dt * (adv_p + ann), 0.0, 1.0);
        out.n_minus[j] = std::clamp(m[j] - dt * (adv_m + ann), 0.0, 1.0);
    }
    return out;
}

double ipf_alpha(const std::vector<double>& target, const std::vector<double>& measured,
                 double alpha0, double kappa) {
    if (target.size() != measured.size()) fail(ErrorKind::Contract, "target and measured lengths differ");
    if (target.empty()) return alpha0;
    double dev = 0.0;
    for (std::size_t a = 0; a < target.size(); ++a) dev += std::abs(target[a] - measured[a]);
    return alpha0 + kappa / (2.0 * double(target.size())) * dev;
}

QuantumState ipf_apply(const QuantumState& state, const BasisTables& tables,
                       const std::vector<double>& target, const std::vector<double>& measured,
                       double alpha, double eps) {
    const std::size_t nb = tables.n_bonds();
    if (target.size() != nb || measured.size() != nb)
        fail(ErrorKind::Contract, "kink vectors must have one entry per bond");
    std::vector<double> lr(nb);
    bool trivial = alpha == 0.0;
    for (std::size_t a = 0; a < nb; ++a) {
        lr[a] = std::log(std::max(target[a], eps) / std::max(measured[a], eps));
        if (lr[a] != 0.0) trivial = false;
    }
    if (trivial || std::all_of(lr.begin(), lr.end(), [](double v) { return v == 0.0; })) return state;

    const std::size_t D = tables.dim();
    std::vector<double> w(D, 0.0);
    for (std::size_t a = 0; a < nb; ++a) {
        if (lr[a] == 0.0) continue;
        const auto& ind = tables.kink_any(a);
        for (std::size_t i = 0; i < D; ++i) w[i] += ind[i] * lr[a];
    }
    for (auto& v : w) v = std::exp(alpha * v);
    QuantumState out = state;
    kernels::active().rscale(w.data(), out.amp.data(), D);
    const double n = out.norm();
    if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorKind::Collapse, "all amplitudes vanished in the IPF update");
    for (auto& z : out.amp) z /= n;
    return out;
}

QuantumState ipf_update(const QuantumState& state, const BasisTables& tables,
                        const std::vector<double>& target, const std::vector<double>& measured,
                        double alpha0, double kappa, double eps) {
    return ipf_apply(state, tables, target, measured, ipf_alpha(target, measured, alpha0, kappa), eps);
}

void HybridConfig::validate() const {
    lattice.validate();
    drive.validate();
    auto bad = [](const std::string& m) { fail(ErrorKind::Validation, m); };
    if (lattice.n_spins > max_spins) {
        std::ostringstream os;
        os << "lattice has " << lattice.n_spins << " spins, capacity is " << max_spins;
        fail(ErrorKind::Capacity, os.str());
    }
    if (!(gamma >= 0.0)) bad("hybrid: gamma must be >= 0");
    if (!(hbar > 0.0)) bad("hybrid: hbar must be > 0");
    if (!(dt > 0.0)) bad("hybrid.dt must be > 0");
    if (dt > drive.t_total) bad("hybrid.dt exceeds drive.t_total");
    if (k_sc < 1) bad("hybrid.k_sc must be >= 1");
    if (record_stride < 1) bad("hybrid.record_stride must be >= 1");
    if (!(omega >= 0.0)) bad("hybrid.omega must be >= 0");
    if (!(alpha0 >= 0.0)) bad("hybrid.alpha0 must be >= 0");
    if (!(kappa >= 0.0)) bad("hybrid.kappa must be >= 0");
    if (!(epsilon_floor > 0.0)) bad("hybrid.epsilon_floor must be > 0");
    if (!(gamma_sync >= 0.0 && gamma_sync <= 1.0)) bad("hybrid.gamma_sync must lie in [0,1]");
    if (mode == HybridMode::Hybrid && lattice.topology != Topology::RingPBC)
        bad("hybrid mode needs a ring lattice; use unitary mode for other geometries");
}

TauCheck tau_check(const HybridConfig& c) {
    double hmin = 0.0, hmax = 0.0, rate = 0.0;
    for (const auto& s : c.drive.segments) {
        hmin = std::min({hmin, s.h_start, s.h_end});
        hmax = std::max({hmax, s.h_start, s.h_end});
        rate = std::max(rate, std::abs(s.h_end - s.h_start) / (s.fraction * c.drive.t_total));
    }
    TauCheck out{0.0, 0.0, 0.0};
    if (rate == 0.0 || hmax == hmin) {
        out.min_gap = aligned_flip_gap(c.lattice, c.gamma, hmin);
        out.tau_lz = INFINITY;
        return out;
    }
    const int n = 121;
    double g = INFINITY;
    for (int i = 0; i < n; ++i) {
        const double h = hmin + (hmax - hmin) * i / (n - 1);
        g = std::min(g, aligned_flip_gap(c.lattice, c.gamma, h));
    }
    // Refine around the -2J style crossing if one is in range.
    try {
        std::vector<double> grid;
        for (int i = 0; i < n; ++i) grid.push_back(hmin + (hmax - hmin) * i / (n - 1));
        g = std::min(g, min_gap_scan(c.lattice, c.gamma, grid).gap);
    } catch (const Error&) {
    }
    out.min_gap = g;
    out.tau_lz = g / rate;
    out.ratio = out.tau_lz > 0.0 ? c.dt / out.tau_lz : INFINITY;
    return out;
}

namespace {

struct Frame {
    double t;
    HermitianOperator H;
    std::optional<Spectrum> S;
};

}  // namespace

HysteresisTrace run_protocol(const HybridConfig& config) { return run_protocol(config, nullptr); }

HysteresisTrace run_protocol(const HybridConfig& c, HybridProbe* probe) {
    c.validate();
    HysteresisTrace trace;

    const TauCheck tc = tau_check(c);
    if (tc.ratio > c.tau_abort) {
        std::ostringstream os;
        os << "dt/tau_LZ = " << tc.ratio << " above abort threshold " << c.tau_abort
           << " (min gap " << tc.min_gap << ")";
        fail(ErrorKind::Stability, os.str());
    }
    if (tc.ratio > c.tau_warn) {
        std::ostringstream os;
        os << "dt/tau_LZ = " << tc.ratio << " above " << c.tau_warn;
        trace.warnings.push_back(os.str());
    }

    const BasisTables tables(c.lattice);
    const double T = c.drive.t_total;
    const long steps = std::max(1L, static_cast<long>(std::ceil(T / c.dt - 1e-9)));
    const double dt = T / double(steps);

    auto hamiltonian_at = [&](double t) {
        return build_hamiltonian(c.lattice, c.gamma, drive_value(c.drive, t).h, c.max_spins);
    };
    auto record = [&](double t, const QuantumState& psi, const HermitianOperator& H, const Spectrum* S) {
        const DriveSample d = drive_value(c.drive, t);
        const Observables o = tables.observe(psi, &H);
        TraceRecord r;
        r.t = t;
        r.s = c.drive.s_pause;
        r.h = d.h;
        r.hdot = d.hdot;
        r.mx = o.mx, r.my = o.my, r.mz = o.mz;
        r.kink_total = o.kink_total;
        r.nplus = o.nplus_sum;
        r.nminus = o.nminus_sum;
        r.energy = o.energy;
        r.segment = c.drive.tag(d.segment);
        if (S) {
            const auto ap = adiabatic_populations(psi, *S);
            r.populations = ap.populations;
            r.mean_energy = ap.mean_energy;
        }
        trace.records.push_back(std::move(r));
    };

    QuantumState psi = QuantumState::basis(c.lattice.n_spins, aligned_index(c.lattice));
    Frame cur{0.0, hamiltonian_at(0.0), std::nullopt};
    if (c.record_populations) cur.S = eigendecompose(cur.H);
    record(0.0, psi, cur.H, cur.S ? &*cur.S : nullptr);

    std::optional<KinkField> field;
    try {
        for (long n = 0; n < steps; ++n) {
            const double t0 = n * dt;
            const double t1 = (n + 1 == steps) ? T : (n + 1) * dt;
            if (c.freeze == FreezePoint::Left) {
                if (!cur.S) cur.S = eigendecompose(cur.H);
                psi = propagate_step(psi, *cur.S, t1 - t0, c.hbar);
            } else {
                psi = propagate_step(psi, eigendecompose(hamiltonian_at(0.5 * (t0 + t1))), t1 - t0, c.hbar);
            }

            if (c.mode == HybridMode::Hybrid && (n + 1) % c.k_sc == 0) {
                const Observables o = tables.observe(psi);
                KinkField meas{o.kinks_plus, o.kinks_minus};
                if (!field) {
                    field = meas;
                } else {
                    const double h_left = drive_value(c.drive, std::max(0.0, t1 - c.k_sc * dt)).h;
                    *field = kinetics_step(*field, h_left, c.k_sc * dt, c.v0, c.omega);
                    for (std::size_t a = 0; a < field->n_plus.size(); ++a) {
                        field->n_plus[a] = (1.0 - c.gamma_sync) * field->n_plus[a] + c.gamma_sync * meas.n_plus[a];
                        field->n_minus[a] = (1.0 - c.gamma_sync) * field->n_minus[a] + c.gamma_sync * meas.n_minus[a];
                    }
                }
                psi = ipf_update(psi, tables, field->total(), meas.total(), c.alpha0, c.kappa, c.epsilon_floor);
            }
            if (probe) probe->on_state(t1, psi);

            cur = Frame{t1, hamiltonian_at(t1), std::nullopt};
            const bool rec = (n + 1) % c.record_stride == 0 || n + 1 == steps;
            if (rec && c.record_populations) cur.S = eigendecompose(cur.H);
            if (rec) record(t1, psi, cur.H, cur.S ? &*cur.S : nullptr);
        }
    } catch (const Error& e) {
        trace.partial = true;
        trace.failure = e.what();
        trace.failure_numeric = e.is_numeric();
    }
    return trace;
}

}  // namespace hyst
