#ifndef TRENDBAND_ERRORS_HPP
#define TRENDBAND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace trendband {

// Input validation failures (bad arguments, malformed files). CLI exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InvalidBandwidthError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidGridError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidLevelError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class GridMismatchError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InsufficientDataError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Parse failure with the 1-based line number of the offending input line.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, long line)
        : ValidationError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

// Failures arising during computation. CLI exit code 2.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Local linear window with fewer than 2 positively weighted points or a
// collinear weighted design; carries the evaluation point that failed.
class DegenerateWindowError : public NumericError {
public:
    DegenerateWindowError(const std::string& what, double at)
        : NumericError(what + " at t=" + std::to_string(at)), at_(at) {}
    double at() const noexcept { return at_; }

private:
    double at_;
};

class NotPsdError : public NumericError {
public:
    using NumericError::NumericError;
};

class DegenerateModelError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace trendband

#endif
