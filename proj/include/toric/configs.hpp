#pragma once

#include "toric/energy.hpp"
#include "toric/group.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace toric {

/// A p-element subset S of G, stored as its characteristic bitset over the
/// row-major site numbering.
class Configuration {
 public:
  explicit Configuration(GridDims dims);
  Configuration(GridDims dims, const std::vector<Index>& member_indices);

  static Configuration from_sites(const GridDims& dims, const std::vector<Site>& sites);

  const GridDims& dims() const noexcept { return dims_; }
  Index p() const noexcept { return p_; }
  bool contains(Index g) const { return bits_.at(static_cast<std::size_t>(g)); }
  void insert(Index g);
  void erase(Index g);

  /// Member indices in increasing order.
  std::vector<Index> members() const;
  std::vector<Site> member_sites() const;

  /// The characteristic vector x_S.
  Eigen::VectorXd indicator() const;

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.dims_ == b.dims_ && a.bits_ == b.bits_;
  }

 private:
  GridDims dims_;
  std::vector<bool> bits_;
  Index p_ = 0;
};

/// Sites whose coordinate sum has the given parity. Requires all n_i even.
Configuration checkerboard(const GridDims& dims, Parity parity);

/// S + k.
Configuration translate(const Configuration& s, const Site& shift);
Configuration translate(const Configuration& s, Index shift);

/// Lexicographically least translate, comparing sorted member index lists.
Configuration canonical_translate(const Configuration& s);

/// Number of distinct translates of S, |G| / |stabiliser|.
Index translation_orbit_size(const Configuration& s);

/// True when b is a translate of a with its axes permuted. Axis permutations
/// are only considered between axes of equal size.
bool related_by_axis_permutation(const Configuration& a, const Configuration& b);

struct EnergyReport {
  /// Members of S (increasing) and their energies E_h(S), aligned.
  std::vector<Index> sites;
  Eigen::VectorXd per_site;
  double e_max = 0.0;
  double e_tot = 0.0;
  bool is_equienergetic = true;
  /// Set for S = {}; all energies are then zero.
  bool empty = false;
};

/// E_h(S) = sum_{g in S, g != h} u(h - g, 0), with E_max and E_tot.
EnergyReport energies(const Configuration& s, const KernelTable& kernel);

/// (Ax)(h) = sum_{g != 0} u(g, 0) x(h - g).
Eigen::VectorXd apply_kernel(const KernelTable& kernel, const Eigen::Ref<const Eigen::VectorXd>& x);

/// (x | Ax); equals E_tot(S) when x is a characteristic vector.
double fractional_energy(const KernelTable& kernel, const Eigen::Ref<const Eigen::VectorXd>& x);

struct CosetReport {
  bool is_coset = false;
  /// S - h for the first member h; a subgroup exactly when is_coset.
  std::optional<Configuration> subgroup;
};

/// Whether S = h + G' for some subgroup G'. Requires S nonempty.
CosetReport is_coset(const Configuration& s);

enum class Objective { Total, Max };
enum class Reduction { None, Translations };

std::string_view objective_name(Objective o);
Objective parse_objective(std::string_view name);

inline constexpr double kDefaultWorkBudget = 1e10;

struct BruteForceOptions {
  Objective objective = Objective::Total;
  Index top_k = 1;
  Reduction reduce = Reduction::None;
  /// Refuse when C(|G|, p) * p^2 exceeds this.
  double budget = kDefaultWorkBudget;
  int threads = 1;
};

struct RankedConfiguration {
  /// Canonical translate under Reduction::Translations, S itself otherwise.
  Configuration representative;
  double value;
  Index orbit_size;
};

/// Estimated elementary steps of an exhaustive p-subset search.
double brute_force_work(Index order, Index p);

/// The top_k best p-subsets (or translation orbits), best first. Values within
/// 1e-10 * (1 + |best|) count as ties and are ordered by canonical form.
std::vector<RankedConfiguration> brute_force(const KernelTable& kernel, Index p,
                                             const BruteForceOptions& options);

std::vector<RankedConfiguration> brute_force(const GridDims& dims, Metric metric,
                                             const EnergyFunction& f, Index p,
                                             const BruteForceOptions& options);

struct LocalSearchOptions {
  Objective objective = Objective::Total;
  int restarts = 20;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct LocalSearchResult {
  Configuration best;
  EnergyReport report;
  double value;
  int restart;
};

/// Single-swap descent from random p-subsets. Deterministic for a given seed;
/// no optimality claim.
LocalSearchResult local_search(const KernelTable& kernel, Index p, const LocalSearchOptions& options);

LocalSearchResult local_search(const GridDims& dims, Metric metric, const EnergyFunction& f, Index p,
                               const LocalSearchOptions& options);

}  // namespace toric
