#pragma once

#include <vector>

namespace hyst {

struct ScheduleRow {
    double s = 0.0;
    double A = 0.0;  // GHz
    double B = 0.0;  // GHz
};

// Anneal table. s strictly increasing, A non-increasing, B non-decreasing.
struct Schedule {
    std::vector<ScheduleRow> rows;
    void validate() const;
};

struct ScheduleValue {
    double A;
    double B;
};

ScheduleValue schedule_lookup(const Schedule& schedule, double s);

// Natural units: |J| = 1, hbar = 1. Device units: energies in GHz, times in
// ns, phase per step 2*pi*E*dt, i.e. an effective hbar of 1/(2*pi).
enum class EnergyUnit { Natural, Device };

struct UnitSystem {
    EnergyUnit unit = EnergyUnit::Natural;
    double hbar() const;
};

}  // namespace hyst
