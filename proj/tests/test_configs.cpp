#include "toric/configs.hpp"
#include "toric/errors.hpp"
#include "toric/spectrum.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

using namespace toric;

namespace {

const EnergyFunction kHarmonic = EnergyFunction::inverse_power(1);

Configuration grid_of(const GridDims& d, const std::vector<std::vector<Index>>& sites) {
  std::vector<Site> s;
  for (const auto& c : sites) s.push_back(Site{c});
  return Configuration::from_sites(d, s);
}

Configuration random_subset(const GridDims& d, Index p, std::mt19937_64& rng) {
  std::vector<Index> all(static_cast<std::size_t>(d.order()));
  std::iota(all.begin(), all.end(), Index{0});
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(p));
  return Configuration(d, all);
}

std::vector<long> longs(const std::vector<Index>& v) { return {v.begin(), v.end()}; }

// Closure of {0} under adding the generators.
std::vector<Index> generated_subgroup(const GridDims& d, const std::vector<Index>& gens) {
  std::set<Index> seen{0};
  std::vector<Index> frontier{0};
  while (!frontier.empty()) {
    const Index g = frontier.back();
    frontier.pop_back();
    for (Index s : gens) {
      const Index h = add_indices(d, g, s);
      if (seen.insert(h).second) frontier.push_back(h);
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace

TEST_SUITE("configs") {

TEST_CASE("configuration basics") {
  const GridDims d{3, 3};
  Configuration s(d);
  CHECK(s.p() == 0);
  s.insert(4);
  s.insert(4);
  s.insert(0);
  CHECK(s.p() == 2);
  CHECK(s.members() == std::vector<Index>{0, 4});
  s.erase(4);
  s.erase(4);
  CHECK(s.p() == 1);
  CHECK(s.indicator().sum() == 1.0);
  CHECK(Configuration::from_sites(d, {Site{{-1, 4}}}).members() == std::vector<Index>{7});
}

TEST_CASE("row configuration energy") {
  const GridDims d{4, 4};
  const KernelTable k = build_kernel(d, Metric::Lee, kHarmonic);
  const EnergyReport r = energies(grid_of(d, {{0, 0}, {0, 1}, {0, 2}, {0, 3}}), k);
  CHECK(std::abs(r.e_tot - 10.0) <= 1e-12);
  CHECK(r.is_equienergetic);
  CHECK(r.e_max == doctest::Approx(2.5));
}

TEST_CASE("singleton and empty configurations") {
  const GridDims d{4, 4};
  const KernelTable k = build_kernel(d, Metric::Lee, kHarmonic);
  const EnergyReport one = energies(grid_of(d, {{2, 1}}), k);
  CHECK(one.e_tot == 0.0);
  CHECK(one.e_max == 0.0);
  CHECK_FALSE(one.empty);
  const EnergyReport none = energies(Configuration(d), k);
  CHECK(none.empty);
  CHECK(none.e_tot == 0.0);
  CHECK_THROWS_AS(energies(Configuration(GridDims{4}), k), std::invalid_argument);
}

TEST_CASE("checkerboard energies") {
  const GridDims d{4, 4};
  const EnergyReport r = energies(checkerboard(d, Parity::Even), build_kernel(d, Metric::Lee, kHarmonic));
  for (Index i = 0; i < r.per_site.size(); ++i) CHECK(r.per_site(i) == doctest::Approx(13.0 / 4).epsilon(1e-14));
  CHECK(r.e_tot == doctest::Approx(26.0).epsilon(1e-14));
  CHECK(r.is_equienergetic);
}

TEST_CASE("energies agree with pairwise oracle and quadratic form") {
  std::mt19937_64 rng(17);
  const std::pair<Metric, std::string> metrics[] = {{Metric::Lee, "lee"},
                                                    {Metric::EuclideanSquared, "euclid-sq"},
                                                    {Metric::Euclidean, "euclid"},
                                                    {Metric::Chebyshev, "chebyshev"}};
  for (const GridDims& d : {GridDims{5, 5}, GridDims{4, 3, 2}, GridDims{13}})
    for (const auto& [m, name] : metrics) {
      const KernelTable k = build_kernel(d, m, EnergyFunction::exponential_atom(1.4));
      for (int t = 0; t < 5; ++t) {
        const Configuration s = random_subset(d, std::uniform_int_distribution<Index>(1, d.order())(rng), rng);
        const EnergyReport r = energies(s, k);
        const auto members = s.members();
        auto f = [](double x) { return std::pow(1.4, -x); };
        const double ref_tot = oracle::total_energy(longs(d.sizes()), name, f, longs(members));
        CHECK(r.e_tot == doctest::Approx(ref_tot).epsilon(1e-12));
        CHECK(r.e_max == doctest::Approx(oracle::max_energy(longs(d.sizes()), name, f, longs(members))).epsilon(1e-12));
        CHECK(r.e_tot == doctest::Approx(r.per_site.sum()).epsilon(1e-14));
        CHECK(r.e_max == r.per_site.maxCoeff());
        CHECK(fractional_energy(k, s.indicator()) == doctest::Approx(r.e_tot).epsilon(1e-12));
      }
    }
}

TEST_CASE("energies are translation invariant") {
  std::mt19937_64 rng(19);
  const GridDims d{6, 4};
  const KernelTable k = build_kernel(d, Metric::Euclidean, kHarmonic);
  for (int t = 0; t < 20; ++t) {
    const Configuration s = random_subset(d, 7, rng);
    const EnergyReport a = energies(s, k);
    const Index shift = std::uniform_int_distribution<Index>(0, d.order() - 1)(rng);
    const EnergyReport b = energies(translate(s, shift), k);
    CHECK(a.e_tot == doctest::Approx(b.e_tot).epsilon(1e-14));
    CHECK(a.e_max == doctest::Approx(b.e_max).epsilon(1e-14));
    std::vector<double> x(a.per_site.data(), a.per_site.data() + a.per_site.size());
    std::vector<double> y(b.per_site.data(), b.per_site.data() + b.per_site.size());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == doctest::Approx(y[i]).epsilon(1e-14));
  }
}

TEST_CASE("coset examples") {
  const GridDims d{4, 4};
  const CosetReport even = is_coset(checkerboard(d, Parity::Even));
  CHECK(even.is_coset);
  CHECK(*even.subgroup == checkerboard(d, Parity::Even));
  CHECK(is_coset(checkerboard(d, Parity::Odd)).is_coset);
  CHECK_FALSE(is_coset(grid_of(d, {{0, 0}, {1, 1}, {2, 3}, {3, 2}})).is_coset);
  CHECK(is_coset(grid_of(d, {{3, 1}})).is_coset);
  CHECK(is_coset(grid_of(d, {{1, 0}, {1, 1}, {1, 2}, {1, 3}})).is_coset);
  CHECK_THROWS_AS(is_coset(Configuration(d)), std::invalid_argument);
}

TEST_CASE("every coset is equienergetic") {
  const std::pair<GridDims, int> cases[] = {{GridDims{4, 4}, 2}, {GridDims{6, 6}, 2}, {GridDims{8, 8}, 2},
                                            {GridDims{2, 8}, 2}, {GridDims{12}, 1},   {GridDims{2, 2, 2}, 3}};
  for (const auto& [d, rank] : cases) {
    const KernelTable k = build_kernel(d, Metric::Chebyshev, EnergyFunction::inverse_power(0.5));
    std::set<std::vector<Index>> subgroups;
    const Index n = d.order();
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < (rank >= 2 ? n : 1); ++b)
        for (Index c = 0; c < (rank >= 3 ? n : 1); ++c) subgroups.insert(generated_subgroup(d, {a, b, c}));
    for (const auto& h : subgroups) {
      const Configuration sub(d, h);
      CHECK(is_coset(sub).is_coset);
      for (Index shift = 0; shift < n; shift += 3) {
        const Configuration coset = translate(sub, shift);
        CHECK(is_coset(coset).is_coset);
        CHECK(energies(coset, k).is_equienergetic);
      }
    }
  }
}

TEST_CASE("canonical translates and orbits") {
  const GridDims d{4, 4};
  const Configuration even = checkerboard(d, Parity::Even);
  CHECK(translation_orbit_size(even) == 2);
  CHECK(canonical_translate(checkerboard(d, Parity::Odd)) == even);
  std::mt19937_64 rng(23);
  for (int t = 0; t < 50; ++t) {
    const Configuration s = random_subset(d, 5, rng);
    const Configuration c = canonical_translate(s);
    CHECK(c.contains(0));
    for (Index k = 0; k < d.order(); ++k) CHECK(canonical_translate(translate(s, k)) == c);
    std::set<std::vector<Index>> orbit;
    for (Index k = 0; k < d.order(); ++k) orbit.insert(translate(s, k).members());
    CHECK(Index(orbit.size()) == translation_orbit_size(s));
  }
}

TEST_CASE("brute force finds the two checkerboards") {
  const GridDims d{4, 4};
  const KernelTable k = build_kernel(d, Metric::Lee, kHarmonic);
  for (Objective obj : {Objective::Total, Objective::Max}) {
    BruteForceOptions opts;
    opts.objective = obj;
    opts.top_k = 3;
    const auto ranked = brute_force(k, 8, opts);
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].representative == checkerboard(d, Parity::Even));
    CHECK(ranked[1].representative == checkerboard(d, Parity::Odd));
    CHECK(ranked[0].value == doctest::Approx(ranked[1].value).epsilon(1e-14));
    CHECK(ranked[2].value > ranked[1].value + 1e-9);
  }
}

TEST_CASE("translation-reduced optima at p = 4") {
  const GridDims d{4, 4};
  BruteForceOptions opts;
  opts.top_k = 4;
  opts.reduce = Reduction::Translations;
  const auto ranked = brute_force(d, Metric::Lee, kHarmonic, 4, opts);
  REQUIRE(ranked.size() == 4);
  const double best = ranked[0].value;
  CHECK(ranked[1].value == doctest::Approx(best).epsilon(1e-12));
  CHECK(ranked[2].value == doctest::Approx(best).epsilon(1e-12));
  CHECK(ranked[3].value > best + 1e-9);
  Index cosets = 0;
  for (int i = 0; i < 3; ++i) cosets += is_coset(ranked[static_cast<std::size_t>(i)].representative).is_coset;
  CHECK(cosets == 2);
}

TEST_CASE("orbit sizes add up to the binomial coefficient") {
  const GridDims d{3, 4};
  const KernelTable k = build_kernel(d, Metric::Lee, kHarmonic);
  for (Index p : {1, 3, 4, 6}) {
    BruteForceOptions opts;
    opts.top_k = 1000;
    opts.reduce = Reduction::Translations;
    Index total = 0;
    for (const auto& r : brute_force(k, p, opts)) total += r.orbit_size;
    double binom = 1;
    for (Index i = 1; i <= p; ++i) binom = binom * double(12 - p + i) / double(i);
    CHECK(double(total) == binom);
  }
}

TEST_CASE("brute force matches the bitmask oracle") {
  for (const GridDims& d : {GridDims{2, 3}, GridDims{3, 4}, GridDims{2, 2, 3}})
    for (Index p = 0; p <= d.order(); ++p) {
      const auto best = brute_force(d, Metric::Euclidean, kHarmonic, p, {});
      REQUIRE(best.size() == 1);
      const double ref = oracle::min_total_energy(longs(d.sizes()), "euclid", [](double x) { return 1 / x; }, p);
      CHECK(best[0].value == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("threads do not change the ranking") {
  const KernelTable k = build_kernel(GridDims{4, 4}, Metric::Chebyshev, kHarmonic);
  BruteForceOptions one;
  one.top_k = 10;
  one.reduce = Reduction::Translations;
  BruteForceOptions four = one;
  four.threads = 4;
  const auto a = brute_force(k, 6, one), b = brute_force(k, 6, four);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].representative == b[i].representative);
    CHECK(a[i].value == b[i].value);
  }
}

TEST_CASE("brute force edge cases") {
  const GridDims d{3, 3};
  const KernelTable k = build_kernel(d, Metric::Lee, kHarmonic);
  const auto full = brute_force(k, 9, {});
  REQUIRE(full.size() == 1);
  CHECK(full[0].representative.p() == 9);
  CHECK(full[0].value == doctest::Approx(9 * k.values.sum()));
  CHECK_THROWS_AS(brute_force(k, 10, {}), std::invalid_argument);
  BruteForceOptions tight;
  tight.budget = 100;
  CHECK_THROWS_AS(brute_force(k, 4, tight), BudgetExceeded);
  CHECK_THROWS_AS(brute_force(GridDims{6, 6}, Metric::Lee, kHarmonic, 18, {}), BudgetExceeded);
}

TEST_CASE("relaxation is a lower bound for every p") {
  for (const GridDims& d : {GridDims{2, 2}, GridDims{4, 4}, GridDims{5, 4}, GridDims{3, 6}}) {
    const KernelTable k = build_kernel(d, Metric::Lee, EnergyFunction::inverse_power(0.3));
    const EigenTable eigs = eigen_table(k);
    for (Index p = 0; p <= d.order(); ++p)
      CHECK(brute_force(k, p, {})[0].value >= solve_relaxation(eigs, p).optimal_value - 1e-9);
  }
}

TEST_CASE("axis permutation relation") {
  const GridDims d{4, 4};
  const Configuration rows = grid_of(d, {{0, 0}, {0, 1}, {0, 2}, {0, 3}});
  const Configuration cols = grid_of(d, {{0, 2}, {1, 2}, {2, 2}, {3, 2}});
  CHECK(related_by_axis_permutation(rows, cols));
  CHECK_FALSE(related_by_axis_permutation(rows, checkerboard(d, Parity::Even)));
  const GridDims r{4, 2};
  CHECK_FALSE(related_by_axis_permutation(grid_of(r, {{0, 0}, {0, 1}}), grid_of(r, {{0, 0}, {1, 0}})));
}

TEST_CASE("local search") {
  const GridDims d{4, 4};
  const KernelTable k = build_kernel(d, Metric::Lee, kHarmonic);
  LocalSearchOptions opts;
  opts.seed = 42;
  const LocalSearchResult a = local_search(k, 8, opts);
  const LocalSearchResult b = local_search(k, 8, opts);
  CHECK(a.best == b.best);
  CHECK(a.value == b.value);
  CHECK(a.best.p() == 8);
  CHECK(a.value == doctest::Approx(energies(a.best, k).e_tot).epsilon(1e-14));
  CHECK(a.value == doctest::Approx(26.0).epsilon(1e-12));

  opts.threads = 3;
  const LocalSearchResult c = local_search(k, 8, opts);
  CHECK(c.best == a.best);

  opts.objective = Objective::Max;
  const LocalSearchResult one = local_search(k, 1, opts);
  CHECK(one.best.p() == 1);
  CHECK(one.value == 0.0);

  opts.restarts = 0;
  CHECK_THROWS_AS(local_search(k, 4, opts), std::invalid_argument);
}

}  // TEST_SUITE
