#include "toric/configs.hpp"

#include "toric/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

namespace toric {

Configuration::Configuration(GridDims dims)
    : dims_(std::move(dims)), bits_(static_cast<std::size_t>(dims_.order()), false) {}

Configuration::Configuration(GridDims dims, const std::vector<Index>& member_indices)
    : Configuration(std::move(dims)) {
  for (Index g : member_indices) insert(g);
}

Configuration Configuration::from_sites(const GridDims& dims, const std::vector<Site>& sites) {
  Configuration s(dims);
  for (const Site& g : sites) s.insert(dims.index_of(make_site(dims, g.coords)));
  return s;
}

void Configuration::insert(Index g) {
  auto bit = bits_.at(static_cast<std::size_t>(g));
  if (!bit) {
    bit = true;
    ++p_;
  }
}

void Configuration::erase(Index g) {
  auto bit = bits_.at(static_cast<std::size_t>(g));
  if (bit) {
    bit = false;
    --p_;
  }
}

std::vector<Index> Configuration::members() const {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(p_));
  for (std::size_t g = 0; g < bits_.size(); ++g)
    if (bits_[g]) out.push_back(static_cast<Index>(g));
  return out;
}

std::vector<Site> Configuration::member_sites() const {
  std::vector<Site> out;
  for (Index g : members()) out.push_back(dims_.site_at(g));
  return out;
}

Eigen::VectorXd Configuration::indicator() const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dims_.order());
  for (Index g : members()) x(g) = 1.0;
  return x;
}

Configuration checkerboard(const GridDims& dims, Parity parity) {
  if (!dims.all_even()) throw std::invalid_argument("checkerboard undefined: every size must be even");
  Configuration s(dims);
  const Index want = parity == Parity::Even ? 0 : 1;
  for (Index g = 0; g < dims.order(); ++g) {
    Index sum = 0;
    for (Index i = 0; i < dims.rank(); ++i) sum += (g / dims.stride(i)) % dims.size(i);
    if (sum % 2 == want) s.insert(g);
  }
  return s;
}

Configuration translate(const Configuration& s, Index shift) {
  Configuration out(s.dims());
  for (Index g : s.members()) out.insert(add_indices(s.dims(), g, shift));
  return out;
}

Configuration translate(const Configuration& s, const Site& shift) {
  return translate(s, s.dims().index_of(make_site(s.dims(), shift.coords)));
}

namespace {

std::vector<Index> sorted_translate(const GridDims& dims, const std::vector<Index>& members, Index shift) {
  std::vector<Index> out;
  out.reserve(members.size());
  for (Index g : members) out.push_back(add_indices(dims, g, shift));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Index> canonical_members(const GridDims& dims, const std::vector<Index>& members) {
  // The least translate contains 0, so only shifts -m for members m compete.
  std::vector<Index> best = members;
  for (Index m : members) {
    auto candidate = sorted_translate(dims, members, negate_index(dims, m));
    if (candidate < best) best = std::move(candidate);
  }
  return best;
}

Index orbit_size_of(const GridDims& dims, const std::vector<Index>& members, const std::vector<bool>& in) {
  if (members.empty()) return 1;
  Index stabiliser = 0;
  for (Index m : members) {
    const Index k = subtract_indices(dims, m, members.front());
    bool fixes = true;
    for (Index g : members)
      if (!in[static_cast<std::size_t>(add_indices(dims, g, k))]) {
        fixes = false;
        break;
      }
    stabiliser += fixes;
  }
  return dims.order() / stabiliser;
}

std::vector<bool> membership(const GridDims& dims, const std::vector<Index>& members) {
  std::vector<bool> in(static_cast<std::size_t>(dims.order()), false);
  for (Index g : members) in[static_cast<std::size_t>(g)] = true;
  return in;
}

/// u(h - g, 0) with precomputed coordinates.
class PairKernel {
 public:
  explicit PairKernel(const KernelTable& kernel)
      : kernel_(kernel), rank_(kernel.dims.rank()), digits_(static_cast<std::size_t>(kernel.dims.order() * rank_)) {
    const GridDims& dims = kernel.dims;
    for (Index g = 0; g < dims.order(); ++g)
      for (Index i = 0; i < rank_; ++i)
        digits_[static_cast<std::size_t>(g * rank_ + i)] = (g / dims.stride(i)) % dims.size(i);
  }

  double operator()(Index h, Index g) const {
    const GridDims& dims = kernel_.dims;
    Index out = 0;
    const Index* a = &digits_[static_cast<std::size_t>(h * rank_)];
    const Index* b = &digits_[static_cast<std::size_t>(g * rank_)];
    for (Index i = 0; i < rank_; ++i) {
      Index c = a[i] - b[i];
      if (c < 0) c += dims.size(i);
      out += c * dims.stride(i);
    }
    return kernel_.values(out);
  }

  Index order() const { return kernel_.dims.order(); }

 private:
  const KernelTable& kernel_;
  Index rank_;
  std::vector<Index> digits_;
};

void check_kernel_matches(const Configuration& s, const KernelTable& kernel) {
  if (!(s.dims() == kernel.dims)) throw std::invalid_argument("configuration and kernel grids differ");
}

}  // namespace

Configuration canonical_translate(const Configuration& s) {
  return Configuration(s.dims(), canonical_members(s.dims(), s.members()));
}

Index translation_orbit_size(const Configuration& s) {
  auto members = s.members();
  return orbit_size_of(s.dims(), members, membership(s.dims(), members));
}

bool related_by_axis_permutation(const Configuration& a, const Configuration& b) {
  if (!(a.dims() == b.dims()) || a.p() != b.p()) return false;
  const GridDims& dims = a.dims();
  const auto target = canonical_members(dims, b.members());
  std::vector<Index> perm(static_cast<std::size_t>(dims.rank()));
  std::iota(perm.begin(), perm.end(), Index{0});
  const auto sites = a.member_sites();
  do {
    bool valid = true;
    for (Index i = 0; i < dims.rank(); ++i)
      valid = valid && dims.size(perm[static_cast<std::size_t>(i)]) == dims.size(i);
    if (!valid) continue;
    std::vector<Index> image;
    for (const Site& g : sites) {
      Site h{std::vector<Index>(g.coords.size())};
      for (std::size_t i = 0; i < perm.size(); ++i) h.coords[i] = g.coords[static_cast<std::size_t>(perm[i])];
      image.push_back(dims.index_of(h));
    }
    std::sort(image.begin(), image.end());
    if (canonical_members(dims, image) == target) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

EnergyReport energies(const Configuration& s, const KernelTable& kernel) {
  check_kernel_matches(s, kernel);
  EnergyReport report;
  report.sites = s.members();
  const auto p = static_cast<Index>(report.sites.size());
  report.per_site = Eigen::VectorXd::Zero(p);
  if (p == 0) {
    report.empty = true;
    return report;
  }
  PairKernel pair(kernel);
  for (Index a = 0; a < p; ++a) {
    double e = 0.0;
    for (Index b = 0; b < p; ++b)
      if (a != b) e += pair(report.sites[static_cast<std::size_t>(a)], report.sites[static_cast<std::size_t>(b)]);
    report.per_site(a) = e;
  }
  report.e_tot = report.per_site.sum();
  report.e_max = report.per_site.maxCoeff();
  report.is_equienergetic = report.e_max - report.per_site.minCoeff() <= 1e-9 * (1.0 + std::abs(report.e_max));
  return report;
}

Eigen::VectorXd apply_kernel(const KernelTable& kernel, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const GridDims& dims = kernel.dims;
  if (x.size() != dims.order()) throw std::invalid_argument("vector length does not match |G|");
  PairKernel pair(kernel);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(dims.order());
  for (Index h = 0; h < dims.order(); ++h)
    for (Index g = 0; g < dims.order(); ++g) y(h) += pair(h, g) * x(g);
  return y;
}

double fractional_energy(const KernelTable& kernel, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return x.dot(apply_kernel(kernel, x));
}

CosetReport is_coset(const Configuration& s) {
  if (s.p() == 0) throw std::invalid_argument("coset test needs a nonempty configuration");
  const GridDims& dims = s.dims();
  const auto members = s.members();
  Configuration shifted = translate(s, negate_index(dims, members.front()));
  const auto t = shifted.members();
  CosetReport report;
  report.is_coset = std::all_of(t.begin(), t.end(), [&](Index a) {
    return std::all_of(t.begin(), t.end(), [&](Index b) { return shifted.contains(subtract_indices(dims, a, b)); });
  });
  report.subgroup = std::move(shifted);
  return report;
}

std::string_view objective_name(Objective o) { return o == Objective::Total ? "total" : "max"; }

Objective parse_objective(std::string_view name) {
  if (name == "total") return Objective::Total;
  if (name == "max") return Objective::Max;
  throw std::invalid_argument("unknown objective: '" + std::string(name) + "'");
}

double brute_force_work(Index order, Index p) {
  if (p < 0 || p > order) return std::numeric_limits<double>::infinity();
  const Index k = std::min(p, order - p);
  long double c = 1;
  for (Index i = 1; i <= k; ++i) c = c * static_cast<long double>(order - k + i) / i;
  const double steps = static_cast<double>(std::max<Index>(p, 1));
  return static_cast<double>(c) * steps * steps;
}

namespace {

double tie_tolerance(double best) { return 1e-10 * (1.0 + std::abs(best)); }

struct Candidate {
  std::vector<Index> canonical;
  double value;
  Index orbit_size;
};

/// Keeps every distinct candidate whose value can still reach the top k.
class TopK {
 public:
  explicit TopK(Index k) : k_(static_cast<std::size_t>(k)) {}

  bool admits(double value) const { return value <= threshold_ + slack(threshold_); }

  void offer(Candidate c) {
    if (!admits(c.value) || !seen_.insert(c.canonical).second) return;
    items_.push_back(std::move(c));
    if (items_.size() >= 4 * k_ + 64) prune();
  }

  void merge(TopK&& other) {
    for (auto& c : other.items_) offer(std::move(c));
  }

  std::vector<Candidate> finish() {
    std::sort(items_.begin(), items_.end(), [](const Candidate& a, const Candidate& b) {
      return a.value != b.value ? a.value < b.value : a.canonical < b.canonical;
    });
    // Regroup near-equal values so that ties are ordered by canonical form.
    for (std::size_t i = 0; i < items_.size();) {
      std::size_t j = i + 1;
      while (j < items_.size() && items_[j].value <= items_[i].value + tie_tolerance(items_[i].value)) ++j;
      std::sort(items_.begin() + static_cast<std::ptrdiff_t>(i), items_.begin() + static_cast<std::ptrdiff_t>(j),
                [](const Candidate& a, const Candidate& b) { return a.canonical < b.canonical; });
      i = j;
    }
    if (items_.size() > k_) items_.resize(k_);
    return std::move(items_);
  }

 private:
  static double slack(double v) { return std::isfinite(v) ? 1e-9 * (1.0 + std::abs(v)) : 0.0; }

  void prune() {
    std::vector<double> values;
    for (const auto& c : items_) values.push_back(c.value);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k_ - 1), values.end());
    threshold_ = values[k_ - 1];
    std::vector<Candidate> kept;
    for (auto& c : items_)
      if (admits(c.value)) kept.push_back(std::move(c));
      else seen_.erase(c.canonical);
    items_ = std::move(kept);
  }

  std::size_t k_;
  double threshold_ = std::numeric_limits<double>::infinity();
  std::vector<Candidate> items_;
  std::set<std::vector<Index>> seen_;
};

double objective_value(const EnergyReport& r, Objective o) { return o == Objective::Total ? r.e_tot : r.e_max; }

/// Depth-first enumeration of p-subsets in lexicographic order with
/// incrementally maintained row sums row[h] = sum_{g in S} u(h - g, 0).
class Enumerator {
 public:
  Enumerator(const KernelTable& kernel, Index p, const BruteForceOptions& options, TopK& top)
      : kernel_(kernel), pair_(kernel), p_(p), options_(options), top_(top),
        row_(Eigen::VectorXd::Zero(kernel.dims.order())) {
    chosen_.reserve(static_cast<std::size_t>(p));
  }

  void run_first(Index first) {
    push(first);
    descend(first + 1, 0.0);
    pop();
  }

 private:
  void push(Index g) {
    chosen_.push_back(g);
    for (Index h = 0; h < pair_.order(); ++h) row_(h) += pair_(h, g);
  }

  void pop() {
    const Index g = chosen_.back();
    chosen_.pop_back();
    for (Index h = 0; h < pair_.order(); ++h) row_(h) -= pair_(h, g);
  }

  // e_tot is the total energy of the chosen prefix.
  void descend(Index start, double e_tot) {
    const Index depth = static_cast<Index>(chosen_.size());
    const Index n = pair_.order();
    if (depth == p_) {
      // Only reached for p = 1, where both objectives are zero.
      leaf(e_tot, chosen_);
      return;
    }
    if (depth + 1 == p_) {
      for (Index i = start; i < n; ++i) {
        const double total = e_tot + 2.0 * row_(i);
        double value = total;
        if (options_.objective == Objective::Max) {
          value = row_(i);
          for (Index h : chosen_) value = std::max(value, row_(h) + pair_(h, i));
        }
        if (!top_.admits(value)) continue;
        chosen_.push_back(i);
        leaf(value, chosen_);
        chosen_.pop_back();
      }
      return;
    }
    for (Index i = start; i <= n - (p_ - depth); ++i) {
      const double total = e_tot + 2.0 * row_(i);
      push(i);
      descend(i + 1, total);
      pop();
    }
  }

  void leaf(double value, const std::vector<Index>& members) {
    if (!top_.admits(value)) return;
    const GridDims& dims = kernel_.dims;
    std::vector<Index> sorted = members;
    std::sort(sorted.begin(), sorted.end());
    Candidate c;
    if (options_.reduce == Reduction::Translations) {
      c.canonical = canonical_members(dims, sorted);
      c.orbit_size = orbit_size_of(dims, c.canonical, membership(dims, c.canonical));
    } else {
      c.canonical = std::move(sorted);
      c.orbit_size = 1;
    }
    c.value = objective_value(energies(Configuration(dims, c.canonical), kernel_), options_.objective);
    top_.offer(std::move(c));
  }

  const KernelTable& kernel_;
  PairKernel pair_;
  Index p_;
  const BruteForceOptions& options_;
  TopK& top_;
  Eigen::VectorXd row_;
  std::vector<Index> chosen_;
};

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace

std::vector<RankedConfiguration> brute_force(const KernelTable& kernel, Index p,
                                             const BruteForceOptions& options) {
  const GridDims& dims = kernel.dims;
  const Index n = dims.order();
  if (p < 0 || p > n) throw std::invalid_argument("p must lie in [0, |G|]");
  if (options.top_k < 1) throw std::invalid_argument("top_k must be positive");
  const double work = brute_force_work(n, p);
  if (work > options.budget)
    throw BudgetExceeded("brute force needs about " + std::to_string(work) + " steps, budget is " +
                             std::to_string(options.budget),
                         work, options.budget);

  TopK top(options.top_k);
  if (p == 0) {
    top.offer(Candidate{{}, 0.0, 1});
  } else {
    const int threads = std::min<Index>(resolve_threads(options.threads), n - p + 1);
    std::vector<TopK> partial(static_cast<std::size_t>(threads), TopK(options.top_k));
    auto work_on = [&](int w) {
      Enumerator e(kernel, p, options, partial[static_cast<std::size_t>(w)]);
      for (Index first = w; first <= n - p; first += threads) e.run_first(first);
    };
    if (threads == 1) {
      work_on(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < threads; ++w) pool.emplace_back(work_on, w);
      for (auto& t : pool) t.join();
    }
    for (auto& part : partial) top.merge(std::move(part));
  }

  std::vector<RankedConfiguration> ranked;
  for (auto& c : top.finish())
    ranked.push_back(RankedConfiguration{Configuration(dims, c.canonical), c.value, c.orbit_size});
  return ranked;
}

std::vector<RankedConfiguration> brute_force(const GridDims& dims, Metric metric, const EnergyFunction& f,
                                             Index p, const BruteForceOptions& options) {
  return brute_force(build_kernel(dims, metric, f), p, options);
}

namespace {

struct DescentOutcome {
  std::vector<Index> members;
  double value;
};

DescentOutcome descend_once(const KernelTable& kernel, const PairKernel& pair, Index p, Objective objective,
                            std::mt19937_64& rng) {
  const Index n = kernel.dims.order();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Index> in(order.begin(), order.begin() + p);
  std::vector<Index> out(order.begin() + p, order.end());

  Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
  for (Index g : in)
    for (Index h = 0; h < n; ++h) row(h) += pair(h, g);

  auto total = [&] {
    double t = 0.0;
    for (Index h : in) t += row(h);
    return t;
  };
  auto maximum = [&] {
    double m = 0.0;
    for (Index h : in) m = std::max(m, row(h));
    return m;
  };

  double e_tot = total();
  double e_max = maximum();
  constexpr int kMaxMoves = 1'000'000;
  for (int move = 0; move < kMaxMoves && p > 0 && p < n; ++move) {
    const double tol = 1e-12 * (1.0 + std::abs(e_tot));
    std::size_t best_a = 0, best_b = 0;
    double best_tot = e_tot, best_max = e_max;
    bool improved = false;
    for (std::size_t a = 0; a < in.size(); ++a) {
      const Index h = in[a];
      for (std::size_t b = 0; b < out.size(); ++b) {
        const Index x = out[b];
        const double new_row_x = row(x) - pair(x, h);
        const double new_tot = e_tot - 2.0 * row(h) + 2.0 * new_row_x;
        if (objective == Objective::Total) {
          if (new_tot < best_tot - tol) {
            best_tot = new_tot;
            best_a = a, best_b = b;
            improved = true;
          }
          continue;
        }
        double new_max = new_row_x;
        for (Index g : in)
          if (g != h) new_max = std::max(new_max, row(g) - pair(g, h) + pair(g, x));
        const bool better = new_max < best_max - tol ||
                            (new_max <= best_max + tol && new_tot < best_tot - tol);
        if (better) {
          best_max = new_max;
          best_tot = new_tot;
          best_a = a, best_b = b;
          improved = true;
        }
      }
    }
    if (!improved) break;
    const Index h = in[best_a], x = out[best_b];
    for (Index g = 0; g < n; ++g) row(g) += pair(g, x) - pair(g, h);
    std::swap(in[best_a], out[best_b]);
    e_tot = total();
    e_max = maximum();
  }
  std::sort(in.begin(), in.end());
  return {in, objective == Objective::Total ? e_tot : e_max};
}

}  // namespace

LocalSearchResult local_search(const KernelTable& kernel, Index p, const LocalSearchOptions& options) {
  const GridDims& dims = kernel.dims;
  if (p < 0 || p > dims.order()) throw std::invalid_argument("p must lie in [0, |G|]");
  if (options.restarts < 1) throw std::invalid_argument("local search needs at least one restart");
  PairKernel pair(kernel);

  std::vector<DescentOutcome> outcomes(static_cast<std::size_t>(options.restarts));
  auto run = [&](int r) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    outcomes[static_cast<std::size_t>(r)] = descend_once(kernel, pair, p, options.objective, rng);
  };
  const int threads = std::min(resolve_threads(options.threads), options.restarts);
  if (threads == 1) {
    for (int r = 0; r < options.restarts; ++r) run(r);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (int r = w; r < options.restarts; r += threads) run(r);
      });
    for (auto& t : pool) t.join();
  }

  // Restarts are compared on freshly summed energies so the winner does not
  // depend on the incremental update history.
  int best = -1;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<EnergyReport> reports;
  for (int r = 0; r < options.restarts; ++r) {
    reports.push_back(energies(Configuration(dims, outcomes[static_cast<std::size_t>(r)].members), kernel));
    const double v = objective_value(reports.back(), options.objective);
    if (v < best_value - tie_tolerance(best_value) || best < 0) {
      best_value = v;
      best = r;
    }
  }
  Configuration winner(dims, outcomes[static_cast<std::size_t>(best)].members);
  return LocalSearchResult{std::move(winner), reports[static_cast<std::size_t>(best)], best_value, best};
}

LocalSearchResult local_search(const GridDims& dims, Metric metric, const EnergyFunction& f, Index p,
                               const LocalSearchOptions& options) {
  return local_search(build_kernel(dims, metric, f), p, options);
}

}  // namespace toric
