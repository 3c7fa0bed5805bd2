#pragma once

#include <stdexcept>
#include <string>

namespace txguard {

// Base for every error thrown by the library. The CLI maps ValidationError to
// exit status 1 and everything else to exit status 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class LayoutMismatchError : public Error {
 public:
  LayoutMismatchError(const std::string& expected, const std::string& actual)
      : Error("feature layout mismatch: expected " + expected + ", got " + actual),
        expected_(expected),
        actual_(actual) {}

  const std::string& expected() const { return expected_; }
  const std::string& actual() const { return actual_; }

 private:
  std::string expected_;
  std::string actual_;
};

class BackendError : public Error {
 public:
  BackendError(const std::string& backend, const std::string& what)
      : Error("scorer backend '" + backend + "': " + what), backend_(backend) {}

  const std::string& backend() const { return backend_; }

 private:
  std::string backend_;
};

}  // namespace txguard
