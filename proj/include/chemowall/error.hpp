#pragma once

#include <stdexcept>
#include <string>

namespace chemowall {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument violates a documented range or precondition.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A Monod denominator a + s vanished (or the state crossed s = -a).
class SingularInput : public Error {
public:
    using Error::Error;
};

/// The proportion x1 / (x1 + x2) was requested for zero total biomass.
class ProportionUndefined : public Error {
public:
    using Error::Error;
};

/// A state component became non-finite during integration.
class BlowUp : public Error {
public:
    BlowUp(const std::string& what, double last_valid_time)
        : Error(what), last_valid_time_(last_valid_time) {}
    double last_valid_time() const noexcept { return last_valid_time_; }

private:
    double last_valid_time_;
};

/// A component fell below the configured floor in a model where positivity is a theorem.
class PositivityViolation : public Error {
public:
    PositivityViolation(const std::string& what, double time)
        : Error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Configuration text could not be parsed or failed validation.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace chemowall
