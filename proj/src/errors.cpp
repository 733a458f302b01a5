#include "hyst/errors.hpp"

namespace hyst {

const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidLattice: return "invalid-lattice";
        case ErrorKind::GaugeInfeasible: return "gauge-infeasible";
        case ErrorKind::OutOfRange: return "out-of-range";
        case ErrorKind::Capacity: return "capacity";
        case ErrorKind::Contract: return "contract-violation";
        case ErrorKind::AdiabaticLimit: return "adiabatic-limit";
        case ErrorKind::Rank: return "rank";
        case ErrorKind::InsufficientData: return "insufficient-data";
        case ErrorKind::IncompleteLoop: return "incomplete-loop";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Inconclusive: return "inconclusive-scan";
        case ErrorKind::NonConverged: return "non-converged";
        case ErrorKind::Stability: return "stability";
        case ErrorKind::Collapse: return "update-collapse";
        case ErrorKind::StepSize: return "step-size";
        case ErrorKind::Singularity: return "singularity";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(kind_name(kind)) + " error: " + message), kind_(kind) {}

bool Error::is_numeric() const noexcept {
    switch (kind_) {
        case ErrorKind::Inconclusive:
        case ErrorKind::NonConverged:
        case ErrorKind::Stability:
        case ErrorKind::Collapse:
        case ErrorKind::StepSize:
        case ErrorKind::Singularity:
            return true;
        default:
            return false;
    }
}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace hyst
