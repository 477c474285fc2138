#pragma once

#include <stdexcept>
#include <string>

namespace nsp {

/// An argument lies outside the domain of the operation (a share outside
/// [0,1], a probability outside [0,1], a negative price, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The market model violates a structural assumption (QoS not
/// non-increasing, entrant QoS not below the incumbent's, wrong model
/// family for a closed form, ...).
class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Affine QoS fitting failed.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file or scenario.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nsp
