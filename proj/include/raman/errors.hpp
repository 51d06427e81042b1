#pragma once

#include <stdexcept>
#include <string>

namespace raman {

// Non-finite or otherwise unusable values produced by an integration or
// transform. `column` is the impulse column being built, or -1.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what, long column = -1)
      : std::runtime_error(what), column_(column) {}
  long column() const noexcept { return column_; }

 private:
  long column_;
};

// A Green set could not be reduced to consistent mode pairs.
class DecompositionInconsistency : public std::runtime_error {
 public:
  DecompositionInconsistency(const std::string& what, double worst_residual)
      : std::runtime_error(what), worst_(worst_residual) {}
  double worst_residual() const noexcept { return worst_; }

 private:
  double worst_;
};

// A statistic that has no value for the given input (e.g. M with no photons).
class UndefinedStatistic : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace raman
