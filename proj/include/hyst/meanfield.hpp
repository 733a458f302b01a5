#pragma once

#include "hyst/drive.hpp"
#include "hyst/trace.hpp"

namespace hyst {

enum class MfaVariant { WeakGamma, Full };

// Either the piecewise protocol or h(t) = h1 sin(omega t) on
// [0, t_end]; the sine drive treats t < pi/(2 omega) as the ramp.
struct MfaDrive {
    enum class Kind { Protocol, Sine } kind = Kind::Sine;
    DriveProtocol protocol;
    double h1 = 1.0;
    double omega = 1.0;
    double periods = 1.0;  // sine: record until pi/(2 omega) + periods * 2 pi / omega

    double t_end() const;
    double h(double t) const;
    double hdot(double t) const;
    SegmentTag tag(double t) const;
};

struct MfaParams {
    double gamma = 0.1;
    double j = 1.0;
    int coordination = 2;
    double lambda = 0.05;
    double beta = 0.5;
    MfaDrive drive;
    double dt = 1e-3;
    MfaVariant variant = MfaVariant::WeakGamma;
    double hbar = 1.0;
    int record_stride = 10;

    void validate() const;
};

struct MagnetizationVector {
    double mx = 0.0, my = 0.0, mz = 0.0;
    double norm() const;
};

// dm/dt with the mean field h~ = h(t) + c J m_z taken from the current m.
// The full variant needs the rotation angle atan(gamma / h~); with
// gamma = 0 and h~ = 0 it throws Singularity unless limit_angle is set, in
// which case the angle pi/2 is used.
MagnetizationVector mfa_derivatives(const MagnetizationVector& m, double t, const MfaParams& params,
                                    bool limit_angle = false);

// Fixed-step RK4 from m = (0, 0, 1). Throws StepSize when |m| > 1 + 1e-6.
HysteresisTrace run_mfa(const MfaParams& params);

// Non-interacting closed form: m_z = cos(th) + cos(a) (1 - cos(th)) with
// a = 2 sqrt((gamma t)^2 + (int h)^2) and th = atan(gamma t / int h).
HysteresisTrace interaction_picture_trace(double gamma, const DriveProtocol& drive, double dt,
                                          int record_stride = 1);

}  // namespace hyst
