#pragma once

#include <stdexcept>
#include <string>

namespace szilard {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A physical precondition was violated (e.g. non-positive temperature).
struct DomainError : Error {
    using Error::Error;
};

/// Caller misuse that is not a physics problem (bad unit tag, empty sweep, ...).
struct UsageError : Error {
    using Error::Error;
};

/// Geometry cannot be represented (partition too close to a wall, sub-3-cell
/// compartment, invalid box dimensions).
struct GeometryError : Error {
    using Error::Error;
};

/// Requested spectrum window contains no levels.
struct EmptySpectrumError : Error {
    using Error::Error;
};

/// The iterative eigensolver failed; message carries iteration counts.
struct SolverError : Error {
    SolverError(const std::string& what, int iterations_done, int basis_size)
        : Error(what + " (block steps: " + std::to_string(iterations_done) +
                ", basis size: " + std::to_string(basis_size) + ")"),
          iterations(iterations_done),
          basis(basis_size) {}
    explicit SolverError(const std::string& what) : Error(what), iterations(0), basis(0) {}
    int iterations;
    int basis;
};

/// Spectrum truncation too aggressive for the requested temperature; carries
/// an estimate of the cutoff that would satisfy the tail budget.
struct TruncationError : Error {
    TruncationError(const std::string& what, double required_cutoff_joule)
        : Error(what), required_cutoff(required_cutoff_joule) {}
    double required_cutoff;
};

}  // namespace szilard
