#pragma once

#include <stdexcept>
#include <string>

namespace swalk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a map or density.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A denominator or determinant vanished within tolerance.
class SingularityError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace swalk
