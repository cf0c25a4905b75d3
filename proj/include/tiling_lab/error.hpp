#pragma once

#include <stdexcept>
#include <string>

namespace tiling_lab {

// Precondition or input-validation failure.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation would exceed its configured size or horizon cap.
class TooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative solver stopped before meeting its tolerance.
class NotConverged : public std::runtime_error {
 public:
  NotConverged(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace tiling_lab
