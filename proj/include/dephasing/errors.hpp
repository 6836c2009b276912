#pragma once

#include <stdexcept>
#include <string>

namespace dephasing {

/// Raised when the ensemble carries no transmitted intensity, so the
/// decoherence ratio has a vanishing denominator.
class UndefinedEpsilonError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Quadrature failed to reach the requested tolerance within the order cap.
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string &what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved_tolerance() const noexcept { return achieved_; }

private:
  double achieved_;
};

/// A sample fell outside the histogram grid.
class OutOfBoundsError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

} // namespace dephasing
