#pragma once

#include <stdexcept>
#include <string>

namespace cliffkit {

// Base for every error raised by the library. Callers that do not care about
// the failure class can catch this one.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

// A finite-difference stencil would sample outside the domain.
class StencilOutOfDomain : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

class OnBoundary : public Error {
 public:
  using Error::Error;
};

class Singularity : public Error {
 public:
  using Error::Error;
};

// Inward offset points for trace extraction left the domain.
class InvalidOffset : public Error {
 public:
  using Error::Error;
};

class UnsupportedDomain : public Error {
 public:
  using Error::Error;
};

}  // namespace cliffkit
