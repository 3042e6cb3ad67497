#pragma once

#include <stdexcept>
#include <string>

namespace percoroute {

// Invalid vertex/edge encoding for the topology at hand.
struct EncodingError : std::runtime_error {
  explicit EncodingError(const std::string& what) : std::runtime_error(what) {}
};

// Operation not defined for this graph family.
struct FamilyError : std::runtime_error {
  explicit FamilyError(const std::string& what) : std::runtime_error(what) {}
};

// A local router tried to probe an edge with no reached endpoint.
struct LocalityError : std::runtime_error {
  explicit LocalityError(const std::string& what) : std::runtime_error(what) {}
};

// Exact enumeration refused: instance exceeds the configured ceiling.
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent configuration input.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Not enough conditioned samples to produce an estimate.
struct InsufficientDataError : std::runtime_error {
  explicit InsufficientDataError(const std::string& what) : std::runtime_error(what) {}
};

// Degenerate input to a scaling fit.
struct FitError : std::runtime_error {
  explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace percoroute
