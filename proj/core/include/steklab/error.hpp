#pragma once

#include <stdexcept>
#include <string>

namespace steklab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument: unknown catalog name, parameter outside its domain,
/// malformed configuration.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Mesh construction or mesh validity failure.
class MeshError : public Error {
 public:
  using Error::Error;
};

/// Linear algebra failure (factorization, eigensolver).
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace steklab
