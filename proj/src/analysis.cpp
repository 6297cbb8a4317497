#include "toric/analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace toric {

namespace {

constexpr double kPi = std::numbers::pi;

double binomial(Index n, Index k) {
  double c = 1.0;
  for (Index i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

}  // namespace

double lambda_1d(Index n, const EnergyFunction& f, Index j) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("lambda_1d needs an even n >= 4");
  j %= n;
  if (j < 0) j += n;
  double acc = 0.0;
  for (Index k = 1; k < n / 2; ++k)
    acc += 2.0 * evaluate(f, static_cast<double>(k)) * std::cos(2.0 * kPi * static_cast<double>((j * k) % n) / n);
  return acc + evaluate(f, static_cast<double>(n / 2)) * (j % 2 == 0 ? 1.0 : -1.0);
}

double kappa(Index n, double x) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("kappa needs an even n >= 4");
  double acc = 0.0;
  for (Index k = 1; k < n / 2; ++k) acc += 2.0 / k * std::cos(2.0 * kPi * x * k / n);
  return acc + 2.0 / n * std::cos(kPi * x);
}

double kappa_prime(Index n, double x) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("kappa_prime needs an even n >= 4");
  if (!(x > 1e-6 && x < n - 1e-6)) throw std::domain_error("kappa_prime refused at or near a pole");
  const double t = kPi * x / n;
  return 2.0 * kPi / n * (std::cos(kPi * x) - 1.0) * std::cos(t) / std::sin(t);
}

double sine_sum(int m, double x) {
  return (std::cos(x / 2) - std::cos((m + 0.5) * x)) / (2.0 * std::sin(x / 2));
}

double hypercube_gap(Index d, const EnergyFunction& f, Index q) {
  if (d < 1) throw std::invalid_argument("hypercube needs d >= 1");
  if (q < 0 || q > d - 1) throw std::invalid_argument("q must lie in [0, d-1]");
  const auto m = static_cast<int>(d - 1 - q);
  const double sign = m % 2 == 0 ? 1.0 : -1.0;
  double acc = 0.0;
  for (Index l = 0; l <= q; ++l) acc += binomial(q, l) * sign * forward_difference(f, m, static_cast<double>(l + 1));
  return 2.0 * acc;
}

FactorCurve factor_curve(Index n, double a, int distance_power) {
  if (n < 1) throw std::invalid_argument("factor curve needs n >= 1");
  if (!(a > 1)) throw std::invalid_argument("factor curve needs a > 1");
  if (distance_power != 1 && distance_power != 2) throw std::invalid_argument("distance power must be 1 or 2");
  FactorCurve curve{n, a, distance_power, Eigen::VectorXd(n), {}};
  using Wide = long double;
  const Wide turn = 2 * std::numbers::pi_v<Wide> / static_cast<Wide>(n);
  for (Index k = 0; k < n; ++k) {
    Wide acc = 0;
    for (Index g = 0; g < n; ++g) {
      const Wide w = static_cast<Wide>(wrap_abs(g, n));
      const Wide weight = std::pow(static_cast<Wide>(a), -(distance_power == 1 ? w : w * w));
      acc += weight * std::cos(turn * static_cast<Wide>((k * g) % n));
    }
    curve.values(k) = static_cast<double>(acc);
  }
  const double lo = curve.values.minCoeff();
  for (Index k = 0; k < n; ++k)
    if (curve.values(k) <= lo + 1e-12 * (1.0 + std::abs(lo))) curve.argmin.push_back(k);
  return curve;
}

double factor_closed_form(Index n, double a, Index k) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("closed form needs an even n");
  const double half_power = std::pow(a, -static_cast<double>(n / 2));
  const double sign = k % 2 == 0 ? 1.0 : -1.0;  // zeta_k^(n/2)
  const double inv = 1.0 / a;
  const double modulus_sq = 1.0 - 2.0 * inv * std::cos(2.0 * kPi * static_cast<double>(k % n) / n) + inv * inv;
  return (1.0 - sign * half_power) * (1.0 - inv * inv) / modulus_sq;
}

std::vector<BernsteinRow> bernstein_sweep(Index n, int distance_power, const std::vector<double>& a_grid) {
  if (a_grid.empty()) throw std::invalid_argument("empty a grid");
  std::vector<BernsteinRow> rows;
  for (double a : a_grid) {
    FactorCurve curve = factor_curve(n, a, distance_power);
    const bool strict = n % 2 == 0 && curve.argmin.size() == 1 && curve.argmin.front() == n / 2;
    rows.push_back(BernsteinRow{a, std::move(curve.argmin), strict});
  }
  return rows;
}

}  // namespace toric
