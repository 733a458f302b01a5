#pragma once

#include <stdexcept>
#include <string>

namespace hyst {

// Failure classes. The CLI maps validation-type kinds to exit code 2 and
// numeric kinds to exit code 3.
enum class ErrorKind {
    InvalidLattice,
    GaugeInfeasible,
    OutOfRange,
    Capacity,
    Contract,
    AdiabaticLimit,
    Rank,
    InsufficientData,
    IncompleteLoop,
    Parse,
    Validation,
    Inconclusive,
    NonConverged,
    Stability,
    Collapse,
    StepSize,
    Singularity,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);
    ErrorKind kind() const noexcept { return kind_; }
    bool is_numeric() const noexcept;

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace hyst
