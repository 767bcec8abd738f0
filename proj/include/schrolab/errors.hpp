#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace schrolab {

/// Precondition violated by a caller-supplied argument.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A cell with non-positive measure was met during matrix assembly.
class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sparse factorization or iteration broke down.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A field vanishes at a vertex where the identity being evaluated needs
/// it to be non-zero.
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, std::size_t vertex)
      : std::domain_error(what + " (vertex " + std::to_string(vertex) + ")"),
        vertex_(vertex) {}

  std::size_t vertex() const noexcept { return vertex_; }

 private:
  std::size_t vertex_;
};

/// Phase increments along an edge too close to pi to resolve a branch; the
/// mesh needs refining.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed experiment configuration. `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace schrolab
