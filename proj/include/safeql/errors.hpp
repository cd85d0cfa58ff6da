#pragma once

#include <stdexcept>
#include <string>

namespace safeql {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct SingularMatrix : Error {
    using Error::Error;
};

struct NotSymmetric : Error {
    using Error::Error;
};

struct NotStabilizable : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

struct OutsideInterior : Error {
    using Error::Error;
};

struct NegativeArgument : Error {
    using Error::Error;
};

struct NotWarmedUp : Error {
    using Error::Error;
};

struct NumericalDivergence : Error {
    using Error::Error;
};

struct InvariantViolation : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& what, int line)
        : Error(what + " (line " + std::to_string(line) + ")"), line(line) {}
    int line;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace safeql
