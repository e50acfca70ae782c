#pragma once
#include <stdexcept>
#include <string>

namespace tbyb {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration or CSV content.
class ConfigError : public Error {
public:
  using Error::Error;
};

// Input too large for an exhaustive path (optimal search, exact Shapley, dense tables).
class SizeLimitError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

// Pricing weights that cannot be normalized (all zero).
class DegeneratePricingError : public Error {
public:
  using Error::Error;
};

} // namespace tbyb
