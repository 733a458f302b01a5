#include "hyst/lattice.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "hyst/errors.hpp"

namespace hyst {

const char* topology_name(Topology t) {
    switch (t) {
        case Topology::RingPBC: return "ring";
        case Topology::GridOBC: return "grid";
        case Topology::Custom: return "custom";
    }
    return "custom";
}

void LatticeSpec::validate() const {
    if (n_spins < 1) fail(ErrorKind::InvalidLattice, "n_spins must be positive");
    if (static_cast<int>(local_fields.size()) != n_spins)
        fail(ErrorKind::InvalidLattice, "local_fields length differs from n_spins");
    if (static_cast<int>(positions.size()) != n_spins)
        fail(ErrorKind::InvalidLattice, "positions length differs from n_spins");
    if (static_cast<int>(readout_sign.size()) != n_spins)
        fail(ErrorKind::InvalidLattice, "readout_sign length differs from n_spins");
    std::set<std::pair<int, int>> seen;
    for (const auto& bd : bonds) {
        if (bd.a < 0 || bd.b < 0 || bd.a >= n_spins || bd.b >= n_spins)
            fail(ErrorKind::InvalidLattice, "bond site index out of range");
        if (bd.a == bd.b) fail(ErrorKind::InvalidLattice, "bond joins a site to itself");
        auto key = std::minmax(bd.a, bd.b);
        if (!seen.insert(key).second) fail(ErrorKind::InvalidLattice, "duplicate bond");
    }
    for (int s : readout_sign)
        if (s != 1 && s != -1) fail(ErrorKind::InvalidLattice, "readout_sign entries must be +1 or -1");
    if (topology == Topology::RingPBC) {
        // A two-site ring closes onto its only bond.
        const int expect = n_spins == 2 ? 1 : n_spins;
        if (static_cast<int>(bonds.size()) != expect)
            fail(ErrorKind::InvalidLattice, "ring must have exactly n_spins bonds");
    }
    if (topology == Topology::GridOBC) {
        const int expect = width * (height - 1) + height * (width - 1);
        if (width * height != n_spins || static_cast<int>(bonds.size()) != expect)
            fail(ErrorKind::InvalidLattice, "grid bond count mismatch");
    }
}

bool LatticeSpec::gauged() const {
    return std::any_of(readout_sign.begin(), readout_sign.end(), [](int s) { return s < 0; });
}

LatticeSpec build_ring(int n, double coupling) {
    if (n < 2) fail(ErrorKind::InvalidLattice, "ring needs n >= 2, got " + std::to_string(n));
    LatticeSpec L;
    L.n_spins = n;
    L.topology = Topology::RingPBC;
    L.local_fields.assign(n, 1.0);
    L.readout_sign.assign(n, 1);
    for (int i = 0; i < n; ++i) {
        L.positions.push_back({static_cast<double>(i), 0.0});
        L.bonds.push_back({i, (i + 1) % n, coupling});
    }
    if (n == 2) L.bonds.pop_back();
    L.validate();
    return L;
}

LatticeSpec build_grid(int width, int height, double coupling) {
    if (width < 2 || height < 2)
        fail(ErrorKind::InvalidLattice, "grid dimensions must be >= 2");
    LatticeSpec L;
    L.n_spins = width * height;
    L.topology = Topology::GridOBC;
    L.width = width;
    L.height = height;
    L.local_fields.assign(L.n_spins, 1.0);
    L.readout_sign.assign(L.n_spins, 1);
    auto idx = [width](int x, int y) { return y * width + x; };
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) L.positions.push_back({double(x), double(y)});
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            if (x + 1 < width) L.bonds.push_back({idx(x, y), idx(x + 1, y), coupling});
            if (y + 1 < height) L.bonds.push_back({idx(x, y), idx(x, y + 1), coupling});
        }
    L.validate();
    return L;
}

LatticeSpec build_custom(int n, std::vector<Bond> bonds) {
    LatticeSpec L;
    L.n_spins = n;
    L.topology = Topology::Custom;
    L.bonds = std::move(bonds);
    L.local_fields.assign(std::max(n, 0), 1.0);
    L.readout_sign.assign(std::max(n, 0), 1);
    for (int i = 0; i < n; ++i) L.positions.push_back({double(i), 0.0});
    L.validate();
    return L;
}

LatticeSpec apply_afm_gauge(const LatticeSpec& lattice) {
    if (lattice.topology != Topology::RingPBC)
        fail(ErrorKind::GaugeInfeasible, "staggered gauge is defined for rings only");
    if (lattice.n_spins % 2 != 0)
        fail(ErrorKind::GaugeInfeasible,
             "odd ring (n=" + std::to_string(lattice.n_spins) + ") cannot host the staggered gauge");
    LatticeSpec G = lattice;
    for (auto& bd : G.bonds) bd.J = -bd.J;
    for (int i = 0; i < G.n_spins; ++i) {
        const int s = (i % 2 == 0) ? 1 : -1;
        G.local_fields[i] = s * lattice.local_fields[i];
        G.readout_sign[i] = s * lattice.readout_sign[i];
    }
    return G;
}

}  // namespace hyst
