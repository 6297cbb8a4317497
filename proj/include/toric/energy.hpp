#pragma once

#include "toric/group.hpp"

#include <Eigen/Core>

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace toric {

/// f(x) = x^(-alpha), alpha > 0.
struct InversePower {
  double alpha;
};

enum class ExponentOf { Distance, DistanceSquared };

/// f(x) = a^(-x) or a^(-x^2), a > 1. With ExponentOf::Distance these are the
/// atoms e^(-tx) of a completely monotonic mixture (a = e^t).
struct ExponentialAtom {
  double base;
  ExponentOf exponent_of = ExponentOf::Distance;
};

/// f given pointwise at the attainable distances.
struct Tabulated {
  std::map<double, double> values;
};

/// Repelling profile f of the distance between two particles.
class EnergyFunction {
 public:
  using Kind = std::variant<InversePower, ExponentialAtom, Tabulated>;

  static EnergyFunction inverse_power(double alpha);
  static EnergyFunction exponential_atom(double base, ExponentOf exponent_of = ExponentOf::Distance);
  static EnergyFunction tabulated(std::map<double, double> values);

  const Kind& kind() const noexcept { return kind_; }
  bool is_smooth() const noexcept { return !std::holds_alternative<Tabulated>(kind_); }

  /// Short textual form, e.g. "inverse-power:1", "exp:1.05:sq", "table".
  std::string describe() const;

 private:
  explicit EnergyFunction(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

double evaluate(const EnergyFunction& f, double x);

/// Exact answer for the built-in analytic families: x^(-alpha) and a^(-x) are
/// completely monotonic, a^(-x^2) is not. Tabulated profiles have no answer.
std::optional<bool> known_complete_monotonicity(const EnergyFunction& f);

/// u(g, 0) = f(delta(g, 0)) over G in row-major site order, with u(0, 0) = 0.
/// Its DFT is the eigenvalue table of the energy kernel.
struct KernelTable {
  GridDims dims;
  Metric metric;
  Eigen::VectorXd values;

  double at(const Site& g) const { return values(dims.index_of(g)); }
};

/// Upper bound on |G| for any table allocated by this library.
inline constexpr Index kMaxTableEntries = Index{1} << 26;

KernelTable build_kernel(const GridDims& dims, Metric metric, const EnergyFunction& f);

enum class Verdict { Pass, Inconclusive, Fail };

std::string_view verdict_name(Verdict v);

struct DifferenceViolation {
  int order;
  double x;
  /// (-1)^m Delta^m f(x); must be strictly positive to pass.
  double signed_value;
  Verdict verdict;
};

struct DifferenceReport {
  Verdict verdict = Verdict::Pass;
  /// Worst verdict per order m = 0..max_order.
  std::vector<Verdict> per_order;
  std::optional<DifferenceViolation> first_violation;
};

/// m-th forward difference, sum_k C(m,k) (-1)^(m+k) f(x+k).
double forward_difference(const EnergyFunction& f, int order, double x);

/// Checks (-1)^m Delta^m f(x) > 0 for m = 0..max_order and integer x in
/// [x_first, x_last]. Values within 1e-12 * max(1, |f(x)|) of zero are
/// reported as Inconclusive.
DifferenceReport check_alternating_differences(const EnergyFunction& f, int max_order,
                                               Index x_first, Index x_last);

struct ProxyViolation {
  int order;
  double x;
  double estimate;
  Verdict verdict;
};

struct MonotonicityProxyReport {
  Verdict verdict = Verdict::Pass;
  std::optional<ProxyViolation> first_violation;
};

/// Sign check of central finite-difference estimates of f^(k), k <= max_order,
/// on the given points. A diagnostic only; throws for tabulated profiles.
MonotonicityProxyReport check_complete_monotonicity_proxy(const EnergyFunction& f, int max_order,
                                                          const std::vector<double>& grid,
                                                          double step);

}  // namespace toric
