#ifndef SHOOT_ERROR_HPP
#define SHOOT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace shoot {

// Error taxonomy. The CLI maps each family onto an exit code:
// ConfigError -> 2, DataError -> 3, NumericalError -> 4.

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public DataError {
public:
    using DataError::DataError;
};

class ParseError : public DataError {
public:
    ParseError(const std::string& what, std::size_t line)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularDesignError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateCorrelationError : public NumericalError {
public:
    DegenerateCorrelationError(const std::string& what, double nu)
        : NumericalError(what + " (nu = " + std::to_string(nu) + ")"), nu_(nu) {}

    double nu() const noexcept { return nu_; }

private:
    double nu_;
};

class DegenerateTestError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class UndefinedMetricError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace shoot

#endif  // SHOOT_ERROR_HPP
