#pragma once

#include <stdexcept>
#include <string>

namespace padicqc {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Inputs violate a domain precondition (wrong prime, bad reduction, context
// mismatch, division by exact zero, ...).
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// The requested answer is not determined by the digits we hold.  Raising the
// working precision and recomputing is the only fix.
struct PrecisionError : Error {
    explicit PrecisionError(const std::string& msg) : Error(msg) {}
};

// A linear system looked singular at working precision.
struct SingularError : PrecisionError {
    explicit SingularError(const std::string& msg) : PrecisionError(msg) {}
};

// A differential picked up a t^{-1} term where the construction guarantees
// there is none.
struct ResidueError : DomainError {
    explicit ResidueError(const std::string& msg) : DomainError(msg) {}
};

} // namespace padicqc
