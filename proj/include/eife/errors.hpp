#pragma once

#include <stdexcept>
#include <string>

namespace eife {

/// Tensor or matrix extents do not agree.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A multi-index lies outside the degree-of-freedom grid.
class BoundsError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// A nonlinearity or energy density was evaluated outside its admissible range.
class DomainError : public std::runtime_error {
public:
    DomainError(const std::string& what, double value)
        : std::runtime_error(what), value_(value) {}

    double value() const noexcept { return value_; }

private:
    double value_;
};

/// Invalid or inconsistent run configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A dense oracle was asked to work beyond its intended problem size.
class ScaleError : public std::length_error {
public:
    using std::length_error::length_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace eife
