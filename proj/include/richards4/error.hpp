#pragma once

#include <stdexcept>
#include <string>

namespace richards4 {

/// Constructor-time rejection of physically or numerically invalid parameters.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value left the admissible range of a map (Kirchhoff domain, saturation range).
class DomainError : public std::out_of_range {
 public:
  explicit DomainError(const std::string& what, long node = -1)
      : std::out_of_range(node < 0 ? what : what + " (node " + std::to_string(node) + ")"),
        node_(node) {}

  /// Grid node at which the violation occurred, or -1 for scalar calls.
  long node() const noexcept { return node_; }

 private:
  long node_;
};

/// Newton iteration exhausted its budget or line search failed.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_residual, long step = -1)
      : std::runtime_error(step < 0 ? what : what + " (step " + std::to_string(step) + ")"),
        last_residual_(last_residual),
        step_(step) {}

  double last_residual() const noexcept { return last_residual_; }
  long step() const noexcept { return step_; }

 private:
  double last_residual_;
  long step_;
};

}  // namespace richards4
