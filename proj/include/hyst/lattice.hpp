#pragma once

#include <array>
#include <string>
#include <vector>

namespace hyst {

enum class Topology { RingPBC, GridOBC, Custom };

const char* topology_name(Topology t);

struct Bond {
    int a = 0;
    int b = 0;
    double J = 1.0;
};

// Sites, bonds and per-site field multipliers. Bond order (a, b) fixes the
// orientation used to split kinks into n+ (up,down) and n- (down,up).
struct LatticeSpec {
    int n_spins = 0;
    std::vector<Bond> bonds;
    std::vector<double> local_fields;
    std::vector<std::array<double, 2>> positions;
    Topology topology = Topology::Custom;
    int width = 0;
    int height = 0;
    // Readout involution: observables multiply site i by readout_sign[i].
    // All +1 unless a gauge transform was applied.
    std::vector<int> readout_sign;

    // Throws InvalidLattice when any invariant is broken.
    void validate() const;
    bool gauged() const;
};

LatticeSpec build_ring(int n, double coupling);
LatticeSpec build_grid(int width, int height, double coupling);
LatticeSpec build_custom(int n, std::vector<Bond> bonds);

// Staggered gauge for even rings: couplings negated, fields alternate
// +1/-1 starting at site 0, odd sites flipped on readout.
LatticeSpec apply_afm_gauge(const LatticeSpec& lattice);

}  // namespace hyst
