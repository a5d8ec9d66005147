#pragma once

#include <stdexcept>
#include <string>

namespace phasemom {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested truncation cannot hold the state within the norm budget.
struct TruncationError : Error {
    using Error::Error;
};

/// Argument outside the operation's domain.
struct DomainError : Error {
    using Error::Error;
};

/// An integration or continuation scheme lost more precision than allowed.
struct NumericalInstability : Error {
    using Error::Error;
};

/// Kernel table failed its convergence checks.
struct ConvergenceError : Error {
    using Error::Error;
};

/// No kernel table available for a requested moment order.
struct MissingKernel : Error {
    using Error::Error;
};

/// Phase values do not cover the full period; all moment estimates would be biased.
struct PhaseCoverageError : Error {
    using Error::Error;
};

/// Synthesis grid too coarse for the requested number of Fourier components.
struct GridTooCoarse : Error {
    using Error::Error;
};

/// Malformed or incompatible file content.
struct FormatError : Error {
    using Error::Error;
};

} // namespace phasemom
