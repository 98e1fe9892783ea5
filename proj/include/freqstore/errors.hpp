#pragma once

#include <stdexcept>
#include <string>

namespace freqstore {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter violates its documented domain (non-positive base, zero droop, ...).
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A transfer function was evaluated exactly at one of its poles.
class PoleEvaluation : public Error {
public:
    using Error::Error;
};

/// Energy-capacity estimate requested without secondary control.
class UndefinedEstimate : public Error {
public:
    using Error::Error;
};

/// The closed-form oracle only covers closed loops of order <= 2.
class UnsupportedOrder : public Error {
public:
    using Error::Error;
};

/// The integrator produced a non-finite state.
class IntegrationFailure : public Error {
public:
    IntegrationFailure(const std::string& what, double last_valid_time)
        : Error(what), last_valid_time_(last_valid_time) {}

    double last_valid_time() const noexcept { return last_valid_time_; }

private:
    double last_valid_time_;
};

/// Scenario file syntax or schema error, anchored to a line (0 when not line-specific).
class ParseError : public Error {
public:
    ParseError(const std::string& source, int line, const std::string& message)
        : Error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace freqstore
