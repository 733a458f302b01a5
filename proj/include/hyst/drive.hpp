#pragma once

#include <string>
#include <vector>

namespace hyst {

struct DriveSegment {
    double fraction = 0.0;
    double h_start = 0.0;
    double h_end = 0.0;
};

enum class SegmentTag { Ramp, Backward, Forward };

const char* segment_name(SegmentTag tag);
SegmentTag parse_segment_name(const std::string& name);

// Piecewise-linear longitudinal field over [0, t_total].
struct DriveProtocol {
    double h_max = 3.0;
    double t_total = 1.0;
    double s_pause = 0.0;
    std::vector<DriveSegment> segments;

    // Ramp 0 -> +h_max (1/5), backward +h_max -> -h_max (2/5), forward back (2/5).
    static DriveProtocol standard(double h_max, double t_total, double s_pause = 0.0);

    void validate() const;
    // A leading segment that starts at h = 0 is the polarization ramp; other
    // segments are backward or forward by the sign of their slope.
    SegmentTag tag(std::size_t segment) const;
    double segment_start(std::size_t segment) const;
    double segment_end(std::size_t segment) const;
};

struct DriveSample {
    double h;
    double hdot;
    std::size_t segment;
};

// The slope is left-continuous: at a boundary it belongs to the segment
// that ends there.
DriveSample drive_value(const DriveProtocol& protocol, double t);

}  // namespace hyst
