#pragma once

#include <stdexcept>
#include <string>

namespace substatic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of the model or operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The model violates one of its invariants (negative radicand, f <= 0 inside the domain, ...).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Surface gravity at the horizon is not strictly positive.
class DegenerateHorizonError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// A hypersurface is not strictly mean-convex where it is required to be.
class MeanConvexityError : public Error {
 public:
  using Error::Error;
};

/// A graph stopped being smooth (or stopped being a graph) during evaluation or flow.
class GraphError : public Error {
 public:
  using Error::Error;
};

/// Linear solve or root finding failed.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or catalogue input. `path` is a JSON-pointer-like location.
class InputError : public Error {
 public:
  InputError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  [[nodiscard]] const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace substatic
