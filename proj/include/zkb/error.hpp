#pragma once

#include <stdexcept>
#include <string>

namespace zkb {

// Base of everything the library throws on a violated contract.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

// A mathematical precondition of the statement being checked does not hold
// for the supplied data (decay at the box edge, zero mass, missing weights).
class HypothesisError : public Error {
public:
  using Error::Error;
};

class BoundaryError : public Error {
public:
  BoundaryError(const std::string& what, double t) : Error(what), t_(t) {}
  double time() const noexcept { return t_; }

private:
  double t_;
};

class NumericalError : public Error {
public:
  using Error::Error;
};

// Adaptive quadrature gave up; the best estimate is still handed back.
class QuadratureError : public NumericalError {
public:
  QuadratureError(const std::string& what, double value, double est_error)
      : NumericalError(what), value_(value), est_error_(est_error) {}
  double value() const noexcept { return value_; }
  double est_error() const noexcept { return est_error_; }

private:
  double value_;
  double est_error_;
};

}  // namespace zkb
