#pragma once

#include <stdexcept>
#include <string>

namespace sigma2 {

// Bad argument values: wrong sizes, malformed inputs, out-of-range knobs.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Mathematically out-of-domain inputs (outside the cone, ratio below the
// semi-convexity threshold, evaluation point outside a polynomial's interval).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Dimensions the formulas do not cover.
class UnsupportedDimension : public std::domain_error {
public:
    explicit UnsupportedDimension(const std::string& what) : std::domain_error(what) {}
};

// A field that must be 2-convex is not, or an iterate left the cone.
class AdmissibilityError : public std::runtime_error {
public:
    explicit AdmissibilityError(const std::string& what) : std::runtime_error(what) {}
};

// Newton or a Krylov solve failed to reach tolerance.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Inconsistent experiment configuration (masks empty, radii beyond the grid).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// File format violations when reading grid files.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sigma2
