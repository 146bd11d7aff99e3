#pragma once

#include <stdexcept>
#include <string>

namespace sgp {

/// Base class of everything the library throws.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Two fields (or a field and a grid) do not share the same grid.
class GridMismatch : public Error {
public:
  using Error::Error;
};

/// A precondition on user-supplied parameters was violated.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// An iterative solver stopped before reaching its target.
class SolverError : public Error {
public:
  SolverError(const std::string& what, double achieved, std::size_t iterations)
      : Error(what), achieved_(achieved), iterations_(iterations) {}

  double achieved() const noexcept { return achieved_; }
  std::size_t iterations() const noexcept { return iterations_; }

private:
  double achieved_;
  std::size_t iterations_;
};

/// Configuration document rejected; key() names the offending entry.
class ConfigError : public Error {
public:
  ConfigError(std::string key, const std::string& what)
      : Error("config key '" + key + "': " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

}  // namespace sgp
