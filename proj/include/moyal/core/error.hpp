#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace moyal {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct AlignmentError : Error {
    using Error::Error;
};

struct ResolutionError : Error {
    using Error::Error;
};

struct NumericalError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace moyal
