#pragma once

#include <stdexcept>
#include <string>

namespace powertwin {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A required channel or column is missing, or a record violates the unified schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Non-finite or out-of-domain arguments to a physical formula.
class InputError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Tensor or parameter shapes disagree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Non-finite loss or gradients during training.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Every row of a trip (or file) was removed by filtering.
class EmptyTripError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

[[noreturn]] void throw_io(const std::string& what);

} // namespace powertwin
