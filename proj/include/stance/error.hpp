#pragma once

#include <stdexcept>
#include <string>

namespace stance {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (files, datasets, labels).
class DataError : public Error {
 public:
  using Error::Error;
};

// Caller violated an argument precondition (bad selector, k < 2, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace stance
