#pragma once

#include <stdexcept>
#include <string>

namespace adhesion {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedDimension : public Error { using Error::Error; };
class DegenerateConfiguration : public Error { using Error::Error; };
class DimensionMismatch : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
class InvalidPotential : public Error { using Error::Error; };
class InvalidModel : public Error { using Error::Error; };
class ResolutionError : public Error { using Error::Error; };

// Thrown when a momentum configuration breaks one of the planar genericity
// conditions; what() names the violated condition.
class GenericityViolation : public Error { using Error::Error; };

class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error("config error at " + (path.empty() ? std::string("/") : path) + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace adhesion
