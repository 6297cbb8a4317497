#pragma once

#include "toric/energy.hpp"
#include "toric/group.hpp"

#include <Eigen/Core>

#include <vector>

namespace toric {

/// One-dimensional eigenvalue on Z/n (n even, n >= 4):
/// sum_{k=1}^{n/2-1} 2 f(k) cos(2 pi j k / n) + f(n/2) (-1)^j.
double lambda_1d(Index n, const EnergyFunction& f, Index j);

/// kappa(x) = sum_{k=1}^{n/2-1} (2/k) cos(2 pi x k / n) + (2/n) cos(pi x), the
/// real interpolation of lambda_1d for f(x) = 1/x.
double kappa(Index n, double x);

/// Closed form of kappa'(x): (2 pi / n)(cos(pi x) - 1) cot(pi x / n).
/// Refuses x within 1e-6 of the poles 0 and n, or outside (0, n).
double kappa_prime(Index n, double x);

/// sum_{k=1}^m sin(k x) = (cos(x/2) - cos((m + 1/2) x)) / (2 sin(x/2)).
double sine_sum(int m, double x);

/// lambda(chi) - lambda(chi~) on the Hamming cube [2]^d, where chi and chi~
/// differ only in the first coordinate (chi_1 = 1, chi~_1 = -1) and q of the
/// remaining coordinates of chi equal 1:
/// 2 sum_{l=0}^q C(q,l) (-1)^(d-1-q) Delta^(d-1-q) f (l+1).
double hypercube_gap(Index d, const EnergyFunction& f, Index q);

/// Per-axis factor sum_{g in Z/n} a^(-w(g)^power) zeta_k^g over all n-th
/// roots of unity zeta_k = exp(2 pi i k / n), w the wrapped distance to 0.
struct FactorCurve {
  Index n;
  double a;
  int distance_power;
  Eigen::VectorXd values;
  std::vector<Index> argmin;
};

FactorCurve factor_curve(Index n, double a, int distance_power);

/// (1 -/+ a^(-n/2)) (1 - a^(-2)) / |1 - a^(-1) zeta_k|^2 for zeta_k^(n/2) = +/-1.
/// Requires n even; valid for distance_power = 1.
double factor_closed_form(Index n, double a, Index k);

struct BernsteinRow {
  double a;
  std::vector<Index> argmin;
  bool is_minus_one_strict_min;
};

/// factor_curve at each a, reporting whether zeta = -1 is the strict minimum.
std::vector<BernsteinRow> bernstein_sweep(Index n, int distance_power, const std::vector<double>& a_grid);

}  // namespace toric
