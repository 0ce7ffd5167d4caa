#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace youngflow {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Window or time point outside the domain of a path.
class DomainError : public Error {
public:
    using Error::Error;
};

// Invalid numeric parameter (exponent, tolerance, count).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Incompatible dimensions between paths or coefficient fields.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Concatenation endpoints do not match.
class JoinError : public Error {
public:
    using Error::Error;
};

// Brute-force oracle asked to enumerate too many partitions.
class SizeError : public Error {
public:
    using Error::Error;
};

// Young integral requested with 1/p + 1/q <= 1.
class RegularityError : public Error {
public:
    using Error::Error;
};

// Exponent constraints cannot be satisfied; the message names the inequality.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

// Non-finite sample data.
class DataError : public Error {
public:
    using Error::Error;
};

// A documented precondition of an operation was violated.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Greedy construction asked to advance from the end of the driver domain.
class ExhaustedError : public Error {
public:
    using Error::Error;
};

// Picard iteration failed after the maximum subdivision depth.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double lo, double hi)
        : Error(what), window_lo(lo), window_hi(hi) {}
    double window_lo;
    double window_hi;
};

// Experiment configuration rejected; `line` is 1-based, 0 when unknown.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::size_t line_number)
        : Error(line_number > 0 ? "line " + std::to_string(line_number) + ": " + what : what),
          line(line_number) {}
    std::size_t line;
};

}  // namespace youngflow
