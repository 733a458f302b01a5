#pragma once

#include <string>
#include <vector>

#include "hyst/drive.hpp"

namespace hyst {

struct TraceRecord {
    double t = 0.0;
    double s = 0.0;
    double h = 0.0;
    double hdot = 0.0;
    double mx = 0.0, my = 0.0, mz = 0.0;
    double kink_total = 0.0;
    double nplus = 0.0;   // sum over bonds of <n+>
    double nminus = 0.0;  // sum over bonds of <n->
    double energy = 0.0;
    SegmentTag segment = SegmentTag::Ramp;
    std::vector<double> populations;  // adiabatic, optional
    double mean_energy = 0.0;         // projected on the adiabatic basis, optional
};

struct HysteresisTrace {
    std::vector<TraceRecord> records;
    bool partial = false;          // run aborted; records stop at the failure
    std::string failure;           // error text when partial
    bool failure_numeric = false;  // numeric or validation class of the failure
    std::vector<std::string> warnings;
};

}  // namespace hyst
