#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace aamr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand dimensions do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A parameter lies outside its admissible range, or a set description is degenerate.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// No closed-form intersection projector exists for the requested set family.
class NoOracleError : public Error {
public:
    using Error::Error;
};

/// Input file or command-line value could not be parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Scale-aware membership tolerance: 1e-9 * (1 + |x|).
inline double membership_tolerance(const Vector& x) { return 1e-9 * (1.0 + x.norm()); }

inline void require_dim(Index expected, Index actual, const char* what)
{
    if (expected != actual) {
        throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                             ", got " + std::to_string(actual));
    }
}

} // namespace aamr
