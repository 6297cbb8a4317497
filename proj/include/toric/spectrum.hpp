#pragma once

#include "toric/dft.hpp"
#include "toric/energy.hpp"
#include "toric/group.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace toric {

/// Eigenvalues lambda(chi) of the energy kernel, indexed like sites.
struct EigenTable {
  GridDims dims;
  Eigen::VectorXd values;
  KernelTable kernel;
  /// Largest |Im| seen before the imaginary parts were discarded.
  double max_imag_residue = 0.0;

  double at(const Character& chi) const { return values(dims.index_of(chi)); }
  double trivial() const { return values(0); }
};

/// Throws NumericalError ("kernel not symmetric") when some |Im| exceeds
/// 1e-9 * (1 + sum |u|).
EigenTable eigen_table(const KernelTable& kernel, DftMethod method = DftMethod::Naive);

/// 1e-9 * (1 + |lambda_min|).
double default_tie_tol(double lambda_min);

struct MinimumReport {
  double lambda_min;
  /// Every non-trivial character within tie_tol of lambda_min, ascending.
  std::vector<Character> argmin;
  double tie_tol;
};

MinimumReport min_nontrivial(const EigenTable& eigs, std::optional<double> tie_tol = std::nullopt);

struct RelaxationSolution {
  Index p;
  double lambda_min;
  std::vector<Character> argmin_characters;
  /// Real dimension of the lambda_min eigenspace orthogonal to 1.
  Index multiplicity;
  /// Dimension of the sphere of optimal fractional solutions.
  Index sphere_dimension;
  double optimal_value;
  bool is_checkerboard_certified;
  double tie_tol;
};

/// Exact optimum of min (x|Ax) subject to (x|x) = (x|1) = p:
/// lambda(1) p^2/|G| + lambda_min (p - p^2/|G|).
RelaxationSolution solve_relaxation(const EigenTable& eigs, Index p, std::optional<double> tie_tol = std::nullopt);

struct CertificateReport {
  GridDims dims;
  Metric metric;
  std::string energy;
  bool certified = false;
  double lambda_min = 0.0;
  double lambda_trivial = 0.0;
  double lambda_minus_one = 0.0;
  std::vector<Character> argmin{};
  /// Argmin characters other than (-1, ..., -1).
  std::vector<Character> offenders{};
  /// Certified: distance from lambda(-1,...,-1) to the next eigenvalue of A
  /// (trivial character included).
  /// Otherwise: lambda(-1,...,-1) - lambda_min.
  double gap = 0.0;
  double optimal_value = 0.0;
  double checkerboard_e_tot = 0.0;
  double checkerboard_e_max = 0.0;
  double tie_tol = 0.0;
  std::string statement{};
};

/// Checkerboard certificate at p = |G|/2. Requires all n_i even.
CertificateReport checkerboard_certificate(const GridDims& dims, Metric metric, const EnergyFunction& f,
                                           std::optional<double> tie_tol = std::nullopt);

}  // namespace toric
