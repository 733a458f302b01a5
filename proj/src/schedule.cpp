#include "hyst/schedule.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

#include "hyst/errors.hpp"

namespace hyst {

void Schedule::validate() const {
    if (rows.empty()) fail(ErrorKind::Validation, "schedule has no rows");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.s < 0.0 || r.s > 1.0) {
            std::ostringstream os;
            os << "schedule row " << i << ": s=" << r.s << " outside [0,1]";
            fail(ErrorKind::Validation, os.str());
        }
        if (i == 0) continue;
        const auto& p = rows[i - 1];
        std::ostringstream os;
        os << "schedule row " << i << ": ";
        if (!(r.s > p.s)) fail(ErrorKind::Validation, os.str() + "s not strictly increasing");
        if (r.A > p.A) fail(ErrorKind::Validation, os.str() + "A increases with s");
        if (r.B < p.B) fail(ErrorKind::Validation, os.str() + "B decreases with s");
    }
}

ScheduleValue schedule_lookup(const Schedule& schedule, double s) {
    const auto& R = schedule.rows;
    if (R.empty()) fail(ErrorKind::Validation, "empty schedule");
    if (!(s >= R.front().s && s <= R.back().s)) {
        std::ostringstream os;
        os << "s=" << s << " outside table range [" << R.front().s << ", " << R.back().s << "]";
        fail(ErrorKind::OutOfRange, os.str());
    }
    auto it = std::lower_bound(R.begin(), R.end(), s,
                               [](const ScheduleRow& r, double v) { return r.s < v; });
    if (it->s == s) return {it->A, it->B};
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (s - lo.s) / (hi.s - lo.s);
    return {lo.A + w * (hi.A - lo.A), lo.B + w * (hi.B - lo.B)};
}

double UnitSystem::hbar() const {
    return unit == EnergyUnit::Natural ? 1.0 : 1.0 / (2.0 * std::numbers::pi);
}

}  // namespace hyst
