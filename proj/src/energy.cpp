#include "toric/energy.hpp"

#include "toric/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace toric {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double table_lookup(const Tabulated& t, double x) {
  const double tol = 1e-9 * std::max(1.0, std::abs(x));
  auto it = t.values.lower_bound(x - tol);
  if (it == t.values.end() || std::abs(it->first - x) > tol)
    throw std::invalid_argument("tabulated energy has no entry for distance " + number(x));
  return it->second;
}

template <typename Scalar>
Scalar evaluate_as(const EnergyFunction& f, Scalar x) {
  return std::visit(
      overloaded{
          [&](const InversePower& p) -> Scalar {
            if (!(x > 0)) throw std::invalid_argument("inverse power needs x > 0");
            return std::pow(x, -Scalar(p.alpha));
          },
          [&](const ExponentialAtom& e) -> Scalar {
            if (x < 0) throw std::invalid_argument("exponential atom needs x >= 0");
            const Scalar exponent = e.exponent_of == ExponentOf::Distance ? x : x * x;
            return std::exp(-exponent * std::log(Scalar(e.base)));
          },
          [&](const Tabulated& t) -> Scalar { return Scalar(table_lookup(t, double(x))); },
      },
      f.kind());
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

Verdict worse(Verdict a, Verdict b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

}  // namespace

EnergyFunction EnergyFunction::inverse_power(double alpha) {
  if (!(alpha > 0) || !std::isfinite(alpha)) throw std::invalid_argument("inverse power needs alpha > 0");
  return EnergyFunction(InversePower{alpha});
}

EnergyFunction EnergyFunction::exponential_atom(double base, ExponentOf exponent_of) {
  if (!(base > 1) || !std::isfinite(base)) throw std::invalid_argument("exponential atom needs a > 1");
  return EnergyFunction(ExponentialAtom{base, exponent_of});
}

EnergyFunction EnergyFunction::tabulated(std::map<double, double> values) {
  if (values.empty()) throw std::invalid_argument("empty energy table");
  for (auto [x, v] : values) {
    if (!(x > 0) || !std::isfinite(x)) throw std::invalid_argument("table distances must be positive");
    if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument("table energies must be positive");
  }
  return EnergyFunction(Tabulated{std::move(values)});
}

std::string EnergyFunction::describe() const {
  return std::visit(overloaded{
                        [](const InversePower& p) { return "inverse-power:" + number(p.alpha); },
                        [](const ExponentialAtom& e) {
                          return "exp:" + number(e.base) +
                                 (e.exponent_of == ExponentOf::DistanceSquared ? ":sq" : "");
                        },
                        [](const Tabulated&) { return std::string("table"); },
                    },
                    kind_);
}

double evaluate(const EnergyFunction& f, double x) { return evaluate_as<double>(f, x); }

std::optional<bool> known_complete_monotonicity(const EnergyFunction& f) {
  return std::visit(overloaded{
                        [](const InversePower&) -> std::optional<bool> { return true; },
                        [](const ExponentialAtom& e) -> std::optional<bool> {
                          return e.exponent_of == ExponentOf::Distance;
                        },
                        [](const Tabulated&) -> std::optional<bool> { return std::nullopt; },
                    },
                    f.kind());
}

KernelTable build_kernel(const GridDims& dims, Metric metric, const EnergyFunction& f) {
  if (dims.order() > kMaxTableEntries)
    throw AllocationRefused("kernel table of " + std::to_string(dims.order()) + " entries refused");
  KernelTable kernel{dims, metric, Eigen::VectorXd::Zero(dims.order())};
  for (Index g = 1; g < dims.order(); ++g) {
    const double v = evaluate(f, distance_to_origin(metric, g, dims));
    if (!(v > 0) || !std::isfinite(v))
      throw std::invalid_argument("energy function must be finite and positive at every distance");
    kernel.values(g) = v;
  }
  return kernel;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Fail: return "fail";
  }
  return "?";
}

double forward_difference(const EnergyFunction& f, int order, double x) {
  if (order < 0) throw std::invalid_argument("difference order must be non-negative");
  double acc = 0.0;
  for (int k = 0; k <= order; ++k) {
    const double sign = (order + k) % 2 == 0 ? 1.0 : -1.0;
    acc += binomial(order, k) * sign * evaluate(f, x + k);
  }
  return acc;
}

DifferenceReport check_alternating_differences(const EnergyFunction& f, int max_order, Index x_first,
                                               Index x_last) {
  if (max_order < 0 || x_last < x_first) throw std::invalid_argument("empty difference window");
  DifferenceReport report;
  report.per_order.assign(static_cast<std::size_t>(max_order) + 1, Verdict::Pass);
  for (int m = 0; m <= max_order; ++m) {
    for (Index xi = x_first; xi <= x_last; ++xi) {
      const double x = static_cast<double>(xi);
      const double value = (m % 2 == 0 ? 1.0 : -1.0) * forward_difference(f, m, x);
      const double tol = 1e-12 * std::max(1.0, std::abs(evaluate(f, x)));
      Verdict v = Verdict::Pass;
      if (value <= -tol) v = Verdict::Fail;
      else if (value <= tol) v = Verdict::Inconclusive;
      if (v == Verdict::Pass) continue;
      auto& slot = report.per_order[static_cast<std::size_t>(m)];
      slot = worse(slot, v);
      report.verdict = worse(report.verdict, v);
      if (!report.first_violation) report.first_violation = DifferenceViolation{m, x, value, v};
    }
  }
  return report;
}

MonotonicityProxyReport check_complete_monotonicity_proxy(const EnergyFunction& f, int max_order,
                                                          const std::vector<double>& grid,
                                                          double step) {
  if (!f.is_smooth()) throw std::invalid_argument("monotonicity proxy requires a smooth energy function");
  if (!(step > 0) || max_order < 0) throw std::invalid_argument("proxy needs step > 0 and max_order >= 0");
  using Wide = long double;
  MonotonicityProxyReport report;
  for (int k = 0; k <= max_order; ++k) {
    const Wide scale = std::pow(Wide(step), Wide(-k));
    for (double x : grid) {
      if (x - 0.5 * k * step <= 0) throw std::invalid_argument("proxy stencil leaves the positive axis");
      Wide acc = 0, magnitude = 0;
      for (int i = 0; i <= k; ++i) {
        const Wide xi = Wide(x) + (Wide(k) / 2 - i) * Wide(step);
        const Wide fi = evaluate_as<Wide>(f, xi);
        const Wide c = Wide(binomial(k, i));
        acc += (i % 2 == 0 ? c : -c) * fi;
        magnitude += c * std::abs(fi);
      }
      const Wide estimate = acc * scale;
      const Wide noise = 64 * std::numeric_limits<Wide>::epsilon() * magnitude * scale;
      const Wide signed_estimate = (k % 2 == 0 ? 1 : -1) * estimate;
      Verdict v = Verdict::Pass;
      if (signed_estimate < -noise) v = Verdict::Fail;
      else if (signed_estimate <= noise) v = Verdict::Inconclusive;
      if (v == Verdict::Pass) continue;
      report.verdict = worse(report.verdict, v);
      if (!report.first_violation)
        report.first_violation = ProxyViolation{k, x, static_cast<double>(estimate), v};
    }
  }
  return report;
}

}  // namespace toric
