#include "hyst/meanfield.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hyst/errors.hpp"

namespace hyst {

namespace {
constexpr double kPi = std::numbers::pi;
}

double MfaDrive::t_end() const {
    if (kind == Kind::Protocol) return protocol.t_total;
    return kPi / (2.0 * omega) + periods * 2.0 * kPi / omega;
}

double MfaDrive::h(double t) const {
    if (kind == Kind::Protocol) return drive_value(protocol, t).h;
    return h1 * std::sin(omega * t);
}

double MfaDrive::hdot(double t) const {
    if (kind == Kind::Protocol) return drive_value(protocol, t).hdot;
    return h1 * omega * std::cos(omega * t);
}

SegmentTag MfaDrive::tag(double t) const {
    if (kind == Kind::Protocol) return protocol.tag(drive_value(protocol, t).segment);
    if (t <= kPi / (2.0 * omega) * (1.0 + 1e-12)) return SegmentTag::Ramp;
    // Backward while cos(omega t) < 0; the turning point at the minimum
    // belongs to the backward branch.
    const double c = std::cos(omega * t);
    if (c < 0.0) return SegmentTag::Backward;
    if (c > 0.0) return SegmentTag::Forward;
    return std::sin(omega * t) < 0.0 ? SegmentTag::Backward : SegmentTag::Forward;
}

void MfaParams::validate() const {
    auto bad = [](const std::string& m) { fail(ErrorKind::Validation, m); };
    if (!(lambda >= 0.0)) bad("mfa.lambda must be >= 0");
    if (!(beta > 0.0)) bad("mfa.beta must be > 0");
    if (!(dt > 0.0)) bad("mfa.dt must be > 0");
    if (!(gamma >= 0.0)) bad("mfa: gamma must be >= 0");
    if (coordination < 0) bad("mfa.coordination must be >= 0");
    if (record_stride < 1) bad("mfa.record_stride must be >= 1");
    if (drive.kind == MfaDrive::Kind::Sine && !(drive.omega > 0.0)) bad("mfa.omega must be > 0");
    if (drive.kind == MfaDrive::Kind::Sine && !(drive.periods > 0.0)) bad("mfa.periods must be > 0");
    if (drive.kind == MfaDrive::Kind::Protocol) drive.protocol.validate();
}

double MagnetizationVector::norm() const { return std::sqrt(mx * mx + my * my + mz * mz); }

MagnetizationVector mfa_derivatives(const MagnetizationVector& m, double t, const MfaParams& p,
                                    bool limit_angle) {
    const double G = p.gamma;
    const double ht = p.drive.h(t) + p.coordination * p.j * m.mz;
    const double h0 = std::sqrt(ht * ht + G * G);
    const double h0p = (ht >= 0.0 ? 1.0 : -1.0) * h0;
    const double th_eq = std::tanh(p.beta * h0p);
    const double L = p.lambda;
    const double ph = h0p * t / p.hbar;
    const double cw = std::cos(ph), sw = std::sin(ph);

    MagnetizationVector d;
    if (p.variant == MfaVariant::WeakGamma) {
        d.mz = -2.0 * L * (m.mz - th_eq) - 2.0 * G * m.my;
        d.mx = -L * m.mx * cw + 2.0 * ht * m.my;
        d.my = -L * (m.my * cw - m.mx * sw) - 2.0 * ht * m.mx + 2.0 * G * m.mz;
        return d;
    }

    double theta;
    if (G == 0.0 && ht == 0.0) {
        if (!limit_angle) fail(ErrorKind::Singularity, "gamma = 0 and h~ = 0 leave the rotation angle undefined");
        theta = kPi / 2.0;
    } else {
        theta = std::atan(G / ht);  // G / 0 -> +inf -> pi/2
    }
    const double ct = std::cos(theta), st = std::sin(theta);
    // <sigma^mu> in the interaction picture.
    const double sx = m.mx * cw * ct + m.my * sw;
    const double sy = m.my * cw - m.mz * sw * st;
    // 2 i g with g = (i/2) G hdot / (G^2 + h~^2) is real.
    const double denom = G * G + ht * ht;
    const double two_ig = denom > 0.0 ? -G * p.drive.hdot(t) / denom : 0.0;

    d.mz = 2.0 * h0p * (-m.my * st) + L * (2.0 * (-m.mz + th_eq) * ct + sx * cw * st + sy * sw * st) +
           two_ig * (2.0 * m.mx * ct + m.mz * st);
    d.mx = 2.0 * h0p * (m.my * ct) + L * (2.0 * (-m.mz + th_eq) * st - sx * cw * ct - sy * sw * ct) +
           two_ig * (-m.mz * ct + m.mx * st);
    // The trace of the reduced density matrix is taken as 1 and the
    // coupling term read with the same real prefactor as the other two rows.
    d.my = 2.0 * h0p * (-m.mx) + L * (-sy * cw + sx * sw) + two_ig;
    return d;
}

HysteresisTrace run_mfa(const MfaParams& p) {
    p.validate();
    HysteresisTrace tr;
    const double T = p.drive.t_end();
    const long steps = std::max(1L, static_cast<long>(std::ceil(T / p.dt - 1e-9)));
    const double h = T / double(steps);
    MagnetizationVector m{0.0, 0.0, 1.0};

    auto push = [&](double t) {
        TraceRecord r;
        r.t = t;
        r.h = p.drive.h(t);
        r.hdot = p.drive.hdot(t);
        r.mx = m.mx, r.my = m.my, r.mz = m.mz;
        r.segment = p.drive.tag(t);
        tr.records.push_back(r);
    };
    auto add = [](const MagnetizationVector& a, const MagnetizationVector& b, double s) {
        return MagnetizationVector{a.mx + s * b.mx, a.my + s * b.my, a.mz + s * b.mz};
    };
    push(0.0);
    try {
        for (long n = 0; n < steps; ++n) {
            const double t = n * h;
            const auto k1 = mfa_derivatives(m, t, p, true);
            const auto k2 = mfa_derivatives(add(m, k1, 0.5 * h), t + 0.5 * h, p, true);
            const auto k3 = mfa_derivatives(add(m, k2, 0.5 * h), t + 0.5 * h, p, true);
            const auto k4 = mfa_derivatives(add(m, k3, h), t + h, p, true);
            m.mx += h / 6.0 * (k1.mx + 2.0 * k2.mx + 2.0 * k3.mx + k4.mx);
            m.my += h / 6.0 * (k1.my + 2.0 * k2.my + 2.0 * k3.my + k4.my);
            m.mz += h / 6.0 * (k1.mz + 2.0 * k2.mz + 2.0 * k3.mz + k4.mz);
            const double t1 = (n + 1 == steps) ? T : (n + 1) * h;
            if (!(m.norm() <= 1.0 + 1e-6)) {
                std::ostringstream os;
                os << "|m| = " << m.norm() << " left the unit ball at t=" << t1 << "; reduce mfa.dt";
                fail(ErrorKind::StepSize, os.str());
            }
            if ((n + 1) % p.record_stride == 0 || n + 1 == steps) push(t1);
        }
    } catch (const Error& e) {
        tr.partial = true;
        tr.failure = e.what();
        tr.failure_numeric = e.is_numeric();
    }
    return tr;
}

HysteresisTrace interaction_picture_trace(double gamma, const DriveProtocol& drive, double dt,
                                          int record_stride) {
    drive.validate();
    if (!(dt > 0.0)) fail(ErrorKind::Validation, "dt must be > 0");
    if (record_stride < 1) fail(ErrorKind::Validation, "record_stride must be >= 1");
    HysteresisTrace tr;
    const double T = drive.t_total;
    const long steps = std::max(1L, static_cast<long>(std::ceil(T / dt - 1e-9)));
    const double h = T / double(steps);
    double integral = 0.0;
    auto push = [&](double t) {
        const DriveSample d = drive_value(drive, t);
        const double gt = gamma * t;
        double theta = 0.0;
        if (gt != 0.0) theta = (integral == 0.0) ? kPi / 2.0 : std::atan(gt / integral);
        const double a = 2.0 * std::hypot(gt, integral);
        TraceRecord r;
        r.t = t;
        r.s = drive.s_pause;
        r.h = d.h;
        r.hdot = d.hdot;
        r.mz = std::cos(theta) + std::cos(a) * (1.0 - std::cos(theta));
        r.segment = drive.tag(d.segment);
        tr.records.push_back(r);
    };
    push(0.0);
    double h_prev = drive_value(drive, 0.0).h;
    for (long n = 0; n < steps; ++n) {
        const double t1 = (n + 1 == steps) ? T : (n + 1) * h;
        const double h_next = drive_value(drive, t1).h;
        integral += 0.5 * (h_prev + h_next) * (t1 - n * h);
        h_prev = h_next;
        if ((n + 1) % record_stride == 0 || n + 1 == steps) push(t1);
    }
    return tr;
}

}  // namespace hyst
