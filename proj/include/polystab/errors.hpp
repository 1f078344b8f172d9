#pragma once

#include <stdexcept>
#include <string>

namespace polystab {

// Malformed input text (DIMACS graph files, polytope JSON).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Gaussian elimination hit a pivot below the singularity threshold.
class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

// The dense eigenvalue iteration failed to converge. Never swallowed:
// callers that can continue (e.g. simplex search probes) must count it.
class EigenSolverError : public std::runtime_error {
public:
    explicit EigenSolverError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace polystab
