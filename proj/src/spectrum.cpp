#include "toric/spectrum.hpp"

#include "toric/configs.hpp"
#include "toric/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace toric {

EigenTable eigen_table(const KernelTable& kernel, DftMethod method) {
  const GridDims& dims = kernel.dims;
  if (kernel.values.size() != dims.order()) throw std::invalid_argument("kernel length does not match |G|");
  const ComplexVector<double> transform = dft_grid(kernel.values, dims, method);

  const double limit = 1e-9 * (1.0 + kernel.values.cwiseAbs().sum());
  const double residue = transform.imag().cwiseAbs().maxCoeff();
  if (residue > limit) {
    std::ostringstream os;
    os << "kernel not symmetric: imaginary residue " << residue << " exceeds " << limit;
    throw NumericalError(os.str());
  }

  // lambda(chi) = lambda(conj chi) exactly as stored.
  Eigen::VectorXd values(dims.order());
  for (Index k = 0; k < dims.order(); ++k) {
    const Index c = negate_index(dims, k);
    values(k) = 0.5 * (transform(k).real() + transform(c).real());
  }
  return EigenTable{dims, std::move(values), kernel, residue};
}

double default_tie_tol(double lambda_min) { return 1e-9 * (1.0 + std::abs(lambda_min)); }

MinimumReport min_nontrivial(const EigenTable& eigs, std::optional<double> tie_tol) {
  const Index n = eigs.dims.order();
  if (n < 2) throw std::invalid_argument("no non-trivial characters when |G| < 2");
  const double lambda_min = eigs.values.tail(n - 1).minCoeff();
  const double tol = tie_tol.value_or(default_tie_tol(lambda_min));
  if (!(tol >= 0)) throw std::invalid_argument("tie tolerance must be non-negative");
  MinimumReport report{lambda_min, {}, tol};
  for (Index k = 1; k < n; ++k)
    if (eigs.values(k) <= lambda_min + tol) report.argmin.push_back(eigs.dims.character_at(k));
  return report;
}

RelaxationSolution solve_relaxation(const EigenTable& eigs, Index p, std::optional<double> tie_tol) {
  const GridDims& dims = eigs.dims;
  const Index n = dims.order();
  if (p < 0 || p > n) throw std::invalid_argument("p must lie in [0, |G|]");
  const MinimumReport minimum = min_nontrivial(eigs, tie_tol);

  const double pd = static_cast<double>(p), nd = static_cast<double>(n);
  RelaxationSolution sol;
  sol.p = p;
  sol.lambda_min = minimum.lambda_min;
  sol.argmin_characters = minimum.argmin;
  // Conjugate pairs contribute one real dimension per character, self-conjugate
  // characters one each, so the count is the set size.
  sol.multiplicity = static_cast<Index>(minimum.argmin.size());
  sol.sphere_dimension = (p == 0 || p == n) ? 0 : sol.multiplicity - 1;
  sol.optimal_value = eigs.trivial() * pd * pd / nd + minimum.lambda_min * (pd - pd * pd / nd);
  sol.tie_tol = minimum.tie_tol;
  sol.is_checkerboard_certified = 2 * p == n && dims.all_even() && minimum.argmin.size() == 1 &&
                                  minimum.argmin.front() == minus_one_character(dims);
  return sol;
}

namespace {

std::string format_character(const Character& chi) {
  std::string s = "(";
  for (std::size_t i = 0; i < chi.indices.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(chi.indices[i]);
  }
  return s + ")";
}

}  // namespace

CertificateReport checkerboard_certificate(const GridDims& dims, Metric metric, const EnergyFunction& f,
                                           std::optional<double> tie_tol) {
  if (!dims.all_even()) throw std::invalid_argument("checkerboard undefined: every size must be even");
  const KernelTable kernel = build_kernel(dims, metric, f);
  const EigenTable eigs = eigen_table(kernel);
  const Index n = dims.order();
  const RelaxationSolution sol = solve_relaxation(eigs, n / 2, tie_tol);
  const Character minus_one = minus_one_character(dims);
  const Index minus_one_index = dims.index_of(minus_one);
  const EnergyReport board = energies(checkerboard(dims, Parity::Even), kernel);

  CertificateReport report{.dims = dims, .metric = metric, .energy = f.describe()};
  report.certified = sol.is_checkerboard_certified;
  report.lambda_min = sol.lambda_min;
  report.lambda_trivial = eigs.trivial();
  report.lambda_minus_one = eigs.values(minus_one_index);
  report.argmin = sol.argmin_characters;
  for (const Character& chi : sol.argmin_characters)
    if (chi != minus_one) report.offenders.push_back(chi);
  if (report.certified) {
    double next = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < n; ++k)
      if (k != minus_one_index) next = std::min(next, eigs.values(k));
    report.gap = next - report.lambda_minus_one;
  } else {
    report.gap = report.lambda_minus_one - sol.lambda_min;
  }
  report.optimal_value = sol.optimal_value;
  report.checkerboard_e_tot = board.e_tot;
  report.checkerboard_e_max = board.e_max;
  report.tie_tol = sol.tie_tol;

  std::ostringstream os;
  if (report.certified) {
    os << "lambda_min is attained only at (-1,...,-1) (tie tolerance " << report.tie_tol
       << "), so the two checkerboards are the unique minimisers of fractional energy at p = |G|/2, "
          "hence of total energy, and as cosets of a subgroup also the unique minimisers of maximal energy";
  } else {
    os << "lambda_min is attained at";
    for (const Character& chi : report.offenders) os << ' ' << format_character(chi);
    os << "; lambda(-1,...,-1) exceeds lambda_min by " << report.gap;
  }
  report.statement = os.str();
  return report;
}

}  // namespace toric
