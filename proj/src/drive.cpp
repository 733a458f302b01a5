#include "hyst/drive.hpp"

#include <cmath>
#include <sstream>

#include "hyst/errors.hpp"

namespace hyst {

const char* segment_name(SegmentTag tag) {
    switch (tag) {
        case SegmentTag::Ramp: return "ramp";
        case SegmentTag::Backward: return "backward";
        case SegmentTag::Forward: return "forward";
    }
    return "ramp";
}

SegmentTag parse_segment_name(const std::string& name) {
    if (name == "ramp") return SegmentTag::Ramp;
    if (name == "backward") return SegmentTag::Backward;
    if (name == "forward") return SegmentTag::Forward;
    fail(ErrorKind::Parse, "unknown segment tag '" + name + "'");
}

DriveProtocol DriveProtocol::standard(double h_max, double t_total, double s_pause) {
    DriveProtocol p;
    p.h_max = h_max;
    p.t_total = t_total;
    p.s_pause = s_pause;
    p.segments = {{0.2, 0.0, h_max}, {0.4, h_max, -h_max}, {0.4, -h_max, h_max}};
    return p;
}

void DriveProtocol::validate() const {
    if (!(t_total > 0.0)) fail(ErrorKind::Validation, "drive.t_total must be > 0");
    if (!(h_max >= 0.0)) fail(ErrorKind::Validation, "drive.h_max must be >= 0");
    if (segments.empty()) fail(ErrorKind::Validation, "drive.segments is empty");
    double sum = 0.0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (!(segments[i].fraction > 0.0))
            fail(ErrorKind::Validation, "drive.segments: fractions must be > 0");
        sum += segments[i].fraction;
        if (i > 0 && std::abs(segments[i].h_start - segments[i - 1].h_end) > 1e-12) {
            std::ostringstream os;
            os << "drive.segments: h jumps at boundary " << i;
            fail(ErrorKind::Validation, os.str());
        }
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "drive.segments: fractions sum to " << sum << ", expected 1";
        fail(ErrorKind::Validation, os.str());
    }
}

SegmentTag DriveProtocol::tag(std::size_t segment) const {
    const auto& s = segments.at(segment);
    if (segment == 0 && s.h_start == 0.0 && segments.size() > 1) return SegmentTag::Ramp;
    return s.h_end < s.h_start ? SegmentTag::Backward : SegmentTag::Forward;
}

double DriveProtocol::segment_start(std::size_t segment) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < segment; ++i) acc += segments[i].fraction;
    return acc * t_total;
}

double DriveProtocol::segment_end(std::size_t segment) const {
    return segment + 1 == segments.size() ? t_total : segment_start(segment + 1);
}

DriveSample drive_value(const DriveProtocol& protocol, double t) {
    const double T = protocol.t_total;
    const double tol = 1e-12 * T;
    if (t < -tol || t > T + tol) {
        std::ostringstream os;
        os << "t=" << t << " outside [0, " << T << "]";
        fail(ErrorKind::OutOfRange, os.str());
    }
    const auto n = protocol.segments.size();
    double start = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& seg = protocol.segments[i];
        const double len = seg.fraction * T;
        const double end = (i + 1 == n) ? T : start + len;
        if (t <= end || i + 1 == n) {
            const double slope = (seg.h_end - seg.h_start) / len;
            double h = seg.h_start + slope * (t - start);
            if (t >= end) h = seg.h_end;
            if (t <= start) h = seg.h_start;
            return {h, slope, i};
        }
        start = end;
    }
    return {protocol.segments.back().h_end, 0.0, n - 1};
}

}  // namespace hyst
