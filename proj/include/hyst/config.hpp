#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyst/drive.hpp"
#include "hyst/hybrid.hpp"
#include "hyst/meanfield.hpp"
#include "hyst/schedule.hpp"

namespace hyst {

// Raw values of the run document, section by section. Every key has a
// default, so an empty document is a valid 4-spin ring run.
struct RunConfig {
    struct Lattice {
        std::string topology = "ring";  // ring | grid
        int n = 4;
        int width = 0;
        int height = 0;
        double coupling = 1.0;
        bool afm_gauge = false;
        int max_spins = kDefaultMaxSpins;
    } lattice;

    struct Drive {
        double h_max = 3.0;
        double t_total = 800.0;
        std::vector<DriveSegment> segments;  // empty: standard protocol
    } drive;

    struct ScheduleSec {
        std::string units = "natural";  // natural | device
        std::string file;               // optional s,A_GHz,B_GHz table
        double s_pause = 0.3;
        double gamma = 0.0;              // > 0 sets the transverse field directly
        double j_over_gamma = 7.87;      // used when neither gamma nor file is set
        double gamma_prime = 1.0;        // dimensionless prefactor on A(s)
    } schedule;

    struct Hybrid {
        std::string mode = "hybrid";  // hybrid | unitary
        double dt = 0.01;
        int k_sc = 1;
        double v0 = 1.0;
        double omega = 0.1;
        double alpha0 = 0.05;
        double kappa = 0.5;
        double epsilon_floor = 1e-8;
        double gamma_sync = 0.1;
        int record_stride = 10;
        std::string freeze = "left";  // left | midpoint
        bool populations = false;
        double tau_warn = 1e-2;
        double tau_abort = 1e-1;
        std::uint64_t seed = 0;
    } hybrid;

    struct Mfa {
        std::string variant = "weak";  // weak | full
        double lambda = 0.05;
        double beta = 0.5;
        int coordination = 2;
        double dt = 1e-3;
        std::string drive = "sine";  // sine | protocol
        double h1 = 1.0;
        double omega = 1.0;
        double periods = 1.0;
        int record_stride = 10;
    } mfa;

    struct Output {
        std::string dir = "out";
        std::string trace = "trace.csv";
        std::string samples;  // empty: no sampling
        int sample_stride = 10;
        int sample_count = 100;
    } output;

    // Base directory for relative schedule paths.
    std::string base_dir;
};

// Throws Parse for malformed text and Validation for unknown keys, type
// mismatches and constraint violations. Messages start with the key path.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Full document with every key; parse_config(dump_config(c)) reproduces c.
std::string dump_config(const RunConfig& config);

// Physical parameters after unit conversion and schedule lookup.
struct ResolvedModel {
    LatticeSpec lattice;
    DriveProtocol drive;
    double gamma = 0.0;
    double j = 1.0;
    double hbar = 1.0;
};

ResolvedModel resolve_model(const RunConfig& config);
HybridConfig make_hybrid_config(const RunConfig& config);
MfaParams make_mfa_params(const RunConfig& config);

}  // namespace hyst
