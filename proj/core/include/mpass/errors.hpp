#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpass {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text; `position()` is a 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Evaluation outside the domain of a guarded construct (sqrt of a negative, x/0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// gradient() was asked for at a point on the declared nonsmooth locus.
class NonsmoothPoint : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Violated mountain-pass geometry or another problem precondition.
class GeometryError : public Error {
 public:
  using Error::Error;
};

}  // namespace mpass
