#pragma once

#include <stdexcept>
#include <string>

namespace fracdisc {

// Base class for all library errors. Each concrete class maps to a distinct
// CLI exit code (see exit_code_for in tools/fracdisc.cpp and README).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Gamma evaluated at (or within tolerance of) a nonpositive integer.
class PoleError : public Error {
public:
    using Error::Error;
};

// Eigendecomposition rejected: reconstruction residual above tolerance.
class NotDiagonalizable : public Error {
public:
    using Error::Error;
};

// LU pivot below the singularity guard.
class SingularMatrix : public Error {
public:
    using Error::Error;
};

// Non-integer power requested for an eigenvalue on the closed negative real axis.
class BranchCutError : public Error {
public:
    using Error::Error;
};

// Series or iteration hit its term cap before meeting the tail criterion.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Grid with non-constant step passed to a uniform-step-only routine.
class NonUniformGrid : public Error {
public:
    using Error::Error;
};

// Time argument at or below zero where negative powers of t appear.
class NonPositiveTime : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class IOError : public Error {
public:
    using Error::Error;
};

} // namespace fracdisc
