#pragma once

#include <stdexcept>
#include <string>

namespace qgw {

/// Value outside the representable range of a fixed-point format.
class RangeError : public std::runtime_error {
  public:
    explicit RangeError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Malformed bitstring or format description.
class FormatError : public std::runtime_error {
  public:
    explicit FormatError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Bad qubit indices, overlapping registers, or violated circuit preconditions.
class CircuitError : public std::runtime_error {
  public:
    explicit CircuitError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Inconsistent configuration (register sizes, table lengths, boundaries).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Requested state exceeds the qubit or memory budget.
class CapacityError : public std::runtime_error {
  public:
    explicit CapacityError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Function values unusable for fitting or evaluation.
class DomainError : public std::runtime_error {
  public:
    explicit DomainError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Non-finite loss during adversarial training; carries the history so far.
class TrainingError : public std::runtime_error {
  public:
    explicit TrainingError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace qgw
