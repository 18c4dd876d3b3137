#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sensorsel {

// Bad shapes, indices or budgets supplied by the caller.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Base for failures that originate in floating point behaviour.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::size_t iterations = 0, double residual = 0.0)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}

  std::size_t iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

// Projection direction whose squared norm fell under the degeneracy cutoff.
class DegenerateDirectionError : public NumericalError {
 public:
  explicit DegenerateDirectionError(const std::string& what) : NumericalError(what) {}
};

class SingularMatrixError : public NumericalError {
 public:
  SingularMatrixError(const std::string& what, std::size_t pivot)
      : NumericalError(what), pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

// A greedy selector ran out of non-degenerate candidates before reaching the budget.
class ExhaustionError : public NumericalError {
 public:
  ExhaustionError(const std::string& what, std::size_t step)
      : NumericalError(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace sensorsel
