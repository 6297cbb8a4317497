#pragma once

#include <Eigen/Core>

#include <compare>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace toric {

using Index = Eigen::Index;

/// A site g = (g_1, ..., g_d) of the grid, each coordinate in [0, n_i).
struct Site {
  std::vector<Index> coords;
  auto operator<=>(const Site&) const = default;
};

/// A character of G, stored by its root-of-unity exponents j_i in [0, n_i):
/// chi(g) = prod_i exp(2 pi i j_i g_i / n_i).
struct Character {
  std::vector<Index> indices;
  auto operator<=>(const Character&) const = default;
};

/// Sizes n_1, ..., n_d of the toric grid G = Z/n_1 x ... x Z/n_d.
///
/// Sites and characters share one row-major mixed-radix numbering (last axis
/// fastest). Every table over G or over its dual uses this numbering.
class GridDims {
 public:
  explicit GridDims(std::vector<Index> sizes);
  GridDims(std::initializer_list<Index> sizes) : GridDims(std::vector<Index>(sizes)) {}

  /// Parses "4,4" or "4x4".
  static GridDims parse(std::string_view text);

  Index rank() const noexcept { return static_cast<Index>(sizes_.size()); }
  Index size(Index axis) const { return sizes_.at(static_cast<std::size_t>(axis)); }
  const std::vector<Index>& sizes() const noexcept { return sizes_; }
  Index order() const noexcept { return order_; }
  Index stride(Index axis) const { return strides_.at(static_cast<std::size_t>(axis)); }
  bool all_even() const noexcept;

  Index index_of(const Site& g) const;
  Index index_of(const Character& chi) const;
  Site site_at(Index index) const;
  Character character_at(Index index) const;

  /// "4x4", "2x2x4".
  std::string to_string() const;

  friend bool operator==(const GridDims& a, const GridDims& b) { return a.sizes_ == b.sizes_; }

 private:
  std::vector<Index> sizes_;
  std::vector<Index> strides_;
  Index order_ = 1;
};

enum class Metric { Lee, EuclideanSquared, Euclidean, Chebyshev };

enum class Parity { Even, Odd };

std::string_view metric_name(Metric m);
/// Accepts lee | euclid | euclid-sq | chebyshev.
Metric parse_metric(std::string_view name);

/// Smallest non-negative member of (a + nZ) u (-a + nZ).
constexpr Index wrap_abs(Index a, Index n) {
  Index r = a % n;
  if (r < 0) r += n;
  return r < n - r ? r : n - r;
}

/// Reduces coordinates modulo the sizes; throws on length mismatch.
Site make_site(const GridDims& dims, std::vector<Index> coords);
Character make_character(const GridDims& dims, std::vector<Index> indices);

Site add(const GridDims& dims, const Site& g, const Site& h);
Site subtract(const GridDims& dims, const Site& g, const Site& h);
Site negate(const GridDims& dims, const Site& g);

/// Index arithmetic on the row-major numbering.
Index add_indices(const GridDims& dims, Index a, Index b);
Index subtract_indices(const GridDims& dims, Index a, Index b);
Index negate_index(const GridDims& dims, Index a);

Character trivial_character(const GridDims& dims);
Character conjugate(const GridDims& dims, const Character& chi);
/// (-1, ..., -1), i.e. indices (n_1/2, ..., n_d/2). Requires all n_i even.
Character minus_one_character(const GridDims& dims);

double distance(Metric metric, const Site& g, const Site& h, const GridDims& dims);

/// Distance of the site with the given index to 0.
double distance_to_origin(Metric metric, Index g, const GridDims& dims);

/// All sites in row-major order.
std::vector<Site> enumerate_sites(const GridDims& dims);

}  // namespace toric
