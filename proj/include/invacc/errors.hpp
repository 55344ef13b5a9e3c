#pragma once

#include <stdexcept>
#include <string>

namespace invacc {

// Error categories map onto CLI exit codes:
//   ValidationError -> 2, NumericalError -> 3, IoError -> 4.

class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace invacc
