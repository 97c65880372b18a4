#pragma once

#include <stdexcept>
#include <string>

namespace ensemblelab {

inline constexpr const char* kVersion = "0.1.0";

// Invalid parameters (bad dof, ensemble preconditions, malformed config).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A computation left the representable range (non-finite summand, overflow).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ensemblelab
