#pragma once

#include <stdexcept>
#include <string>

namespace lfc {

// Base class for every failure raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid user-supplied structure: graph, topology, or config constraints.
struct ValidationError : Error {
    explicit ValidationError(const std::string& what) : Error(what) {}
};

// Numerical kernel failures.
struct SingularMatrixError : Error {
    explicit SingularMatrixError(const std::string& what) : Error(what) {}
};

struct NotSymmetricError : Error {
    explicit NotSymmetricError(const std::string& what) : Error(what) {}
};

struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& what) : Error(what) {}
};

struct NotPositiveStableError : Error {
    explicit NotPositiveStableError(const std::string& what) : Error(what) {}
};

// Analysis gate failures: unreachable leader, gain below threshold,
// definiteness violations.
struct AnalysisError : Error {
    explicit AnalysisError(const std::string& what) : Error(what) {}
};

} // namespace lfc
