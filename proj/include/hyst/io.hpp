#pragma once

#include <iosfwd>
#include <string>

#include "hyst/analysis.hpp"
#include "hyst/schedule.hpp"
#include "hyst/trace.hpp"

namespace hyst {

// 17 significant digits: strtod reads the text back to the same double.
std::string format_number(double v);

Schedule read_schedule_csv(std::istream& in);
Schedule load_schedule_csv(const std::string& path);

inline constexpr const char* kTraceHeader = "t,s,h,hdot,mx,my,mz,kink_total,nplus,nminus,energy,segment";

void write_trace_csv(const HysteresisTrace& trace, std::ostream& out);
void write_trace_csv(const HysteresisTrace& trace, const std::string& path);
HysteresisTrace read_trace_csv(std::istream& in);
HysteresisTrace load_trace_csv(const std::string& path);

// Adiabatic populations, one row per record: t,h,mean_energy,p0,p1,...
void write_populations_csv(const HysteresisTrace& trace, const std::string& path);

// Columns h,segment,config. config is a bitstring with 0 = up (+1) and
// 1 = down (-1); '+' and '-' are accepted on input as well.
void write_sampleset_csv(const SampleSet& set, std::ostream& out);
void write_sampleset_csv(const SampleSet& set, const std::string& path);
SampleSet read_sampleset_csv(std::istream& in);
SampleSet load_sampleset_csv(const std::string& path);

// Trace with m_z replaced by the per-point sample mean, for running the
// loop pipeline on experiment-style data.
HysteresisTrace trace_from_samples(const SampleSet& set);

}  // namespace hyst
