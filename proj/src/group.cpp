#include "toric/group.hpp"

#include "toric/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace toric {

GridDims::GridDims(std::vector<Index> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw std::invalid_argument("grid needs at least one dimension");
  for (Index n : sizes_) {
    if (n < 1) throw std::invalid_argument("grid sizes must be positive");
    if (order_ > std::numeric_limits<Index>::max() / n)
      throw AllocationRefused("grid order overflows the index type");
    order_ *= n;
  }
  strides_.assign(sizes_.size(), 1);
  for (std::size_t i = sizes_.size() - 1; i > 0; --i) strides_[i - 1] = strides_[i] * sizes_[i];
}

GridDims GridDims::parse(std::string_view text) {
  std::vector<Index> sizes;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find_first_of(",x", pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view token = text.substr(pos, end - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    Index value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
      throw std::invalid_argument("malformed dims: '" + std::string(text) + "'");
    sizes.push_back(value);
    pos = end + 1;
  }
  return GridDims(std::move(sizes));
}

bool GridDims::all_even() const noexcept {
  return std::all_of(sizes_.begin(), sizes_.end(), [](Index n) { return n % 2 == 0; });
}

Index GridDims::index_of(const Site& g) const {
  if (static_cast<Index>(g.coords.size()) != rank())
    throw std::invalid_argument("site rank does not match grid");
  Index index = 0;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    Index c = g.coords[i];
    if (c < 0 || c >= sizes_[i]) throw std::out_of_range("site coordinate out of range");
    index += c * strides_[i];
  }
  return index;
}

Index GridDims::index_of(const Character& chi) const { return index_of(Site{chi.indices}); }

Site GridDims::site_at(Index index) const {
  if (index < 0 || index >= order_) throw std::out_of_range("site index out of range");
  Site g{std::vector<Index>(sizes_.size())};
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    g.coords[i] = index / strides_[i];
    index %= strides_[i];
  }
  return g;
}

Character GridDims::character_at(Index index) const { return Character{site_at(index).coords}; }

std::string GridDims::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (i) out += 'x';
    out += std::to_string(sizes_[i]);
  }
  return out;
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::Lee: return "lee";
    case Metric::EuclideanSquared: return "euclid-sq";
    case Metric::Euclidean: return "euclid";
    case Metric::Chebyshev: return "chebyshev";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  if (name == "lee") return Metric::Lee;
  if (name == "euclid-sq") return Metric::EuclideanSquared;
  if (name == "euclid") return Metric::Euclidean;
  if (name == "chebyshev") return Metric::Chebyshev;
  throw std::invalid_argument("unknown metric: '" + std::string(name) + "'");
}

namespace {

std::vector<Index> reduced(const GridDims& dims, std::vector<Index> coords) {
  if (static_cast<Index>(coords.size()) != dims.rank())
    throw std::invalid_argument("coordinate count does not match grid rank");
  for (Index i = 0; i < dims.rank(); ++i) {
    Index n = dims.size(i);
    Index& c = coords[static_cast<std::size_t>(i)];
    c %= n;
    if (c < 0) c += n;
  }
  return coords;
}

void check_rank(const GridDims& dims, const Site& g) {
  if (static_cast<Index>(g.coords.size()) != dims.rank())
    throw std::invalid_argument("site rank does not match grid");
}

}  // namespace

Site make_site(const GridDims& dims, std::vector<Index> coords) {
  return Site{reduced(dims, std::move(coords))};
}

Character make_character(const GridDims& dims, std::vector<Index> indices) {
  return Character{reduced(dims, std::move(indices))};
}

Site add(const GridDims& dims, const Site& g, const Site& h) {
  check_rank(dims, g);
  check_rank(dims, h);
  std::vector<Index> c(g.coords.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = g.coords[i] + h.coords[i];
  return make_site(dims, std::move(c));
}

Site subtract(const GridDims& dims, const Site& g, const Site& h) {
  check_rank(dims, g);
  check_rank(dims, h);
  std::vector<Index> c(g.coords.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = g.coords[i] - h.coords[i];
  return make_site(dims, std::move(c));
}

Site negate(const GridDims& dims, const Site& g) {
  check_rank(dims, g);
  std::vector<Index> c(g.coords.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = -g.coords[i];
  return make_site(dims, std::move(c));
}

Index add_indices(const GridDims& dims, Index a, Index b) {
  Index out = 0;
  for (Index i = 0; i < dims.rank(); ++i) {
    Index s = dims.stride(i), n = dims.size(i);
    Index c = (a / s) % n + (b / s) % n;
    if (c >= n) c -= n;
    out += c * s;
  }
  return out;
}

Index subtract_indices(const GridDims& dims, Index a, Index b) {
  Index out = 0;
  for (Index i = 0; i < dims.rank(); ++i) {
    Index s = dims.stride(i), n = dims.size(i);
    Index c = (a / s) % n - (b / s) % n;
    if (c < 0) c += n;
    out += c * s;
  }
  return out;
}

Index negate_index(const GridDims& dims, Index a) { return subtract_indices(dims, 0, a); }

Character trivial_character(const GridDims& dims) {
  return Character{std::vector<Index>(static_cast<std::size_t>(dims.rank()), 0)};
}

Character conjugate(const GridDims& dims, const Character& chi) {
  return Character{negate(dims, Site{chi.indices}).coords};
}

Character minus_one_character(const GridDims& dims) {
  if (!dims.all_even()) throw std::invalid_argument("(-1,...,-1) needs all sizes even");
  std::vector<Index> j(dims.sizes());
  for (Index& v : j) v /= 2;
  return Character{std::move(j)};
}

namespace {

template <typename Offset>
double metric_from_offsets(Metric metric, const GridDims& dims, Offset offset) {
  double acc = 0.0;
  for (Index i = 0; i < dims.rank(); ++i) {
    const double w = static_cast<double>(wrap_abs(offset(i), dims.size(i)));
    switch (metric) {
      case Metric::Lee: acc += w; break;
      case Metric::EuclideanSquared:
      case Metric::Euclidean: acc += w * w; break;
      case Metric::Chebyshev: acc = std::max(acc, w); break;
    }
  }
  return metric == Metric::Euclidean ? std::sqrt(acc) : acc;
}

}  // namespace

double distance(Metric metric, const Site& g, const Site& h, const GridDims& dims) {
  check_rank(dims, g);
  check_rank(dims, h);
  return metric_from_offsets(metric, dims, [&](Index i) {
    auto k = static_cast<std::size_t>(i);
    return h.coords[k] - g.coords[k];
  });
}

double distance_to_origin(Metric metric, Index g, const GridDims& dims) {
  return metric_from_offsets(metric, dims, [&](Index i) { return (g / dims.stride(i)) % dims.size(i); });
}

std::vector<Site> enumerate_sites(const GridDims& dims) {
  std::vector<Site> sites;
  sites.reserve(static_cast<std::size_t>(dims.order()));
  for (Index k = 0; k < dims.order(); ++k) sites.push_back(dims.site_at(k));
  return sites;
}

}  // namespace toric
