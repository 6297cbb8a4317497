#pragma once

#include <stdexcept>
#include <string>

namespace toric {

/// A search or enumeration whose estimated cost exceeds the configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, double estimate, double budget)
      : std::runtime_error(what), estimate_(estimate), budget_(budget) {}
  double estimate() const noexcept { return estimate_; }
  double budget() const noexcept { return budget_; }

 private:
  double estimate_;
  double budget_;
};

/// A table over G that would be too large to allocate.
class AllocationRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Floating-point diagnostics that invalidate a result, e.g. a DFT output with
/// a non-negligible imaginary part.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace toric
