#pragma once

#include <stdexcept>
#include <string>

namespace fgrover {

/// Base of every error raised by the library. The category maps onto a CLI exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept = 0;
};

/// Invalid configuration value or physical constraint violation.
class ConfigError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

/// Mismatched grids or array lengths.
class DimensionError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
};

/// A profile measurement whose precondition does not hold (clipped or ambiguous maximum).
class MeasurementError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
};

/// Failure while running a simulation or analysis.
class SimulationError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
};

class IoError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 4; }
};

} // namespace fgrover
