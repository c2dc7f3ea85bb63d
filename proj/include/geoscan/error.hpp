#pragma once

#include <stdexcept>
#include <string>

namespace geoscan {

// Invalid user-supplied configuration: bad flags, bounds, kernel parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A sample set is too small for the unbiased estimator (needs >= 2 per side).
class InsufficientSamples : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A memory or candidate-count budget would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A bound or threshold formula was evaluated outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace geoscan
