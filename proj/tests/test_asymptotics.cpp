#include <doctest.h>

#include <cmath>

#include "oneshot/asymptotics.hpp"
#include "oneshot/error.hpp"
#include "oneshot/smooth.hpp"
#include "random_instances.hpp"

using namespace oneshot;

namespace {

// Sums P^n over all |X|^n sequences whose per-symbol log-ratio passes `keep`.
template <typename Keep>
double brute_spectral(const Pmf& p, const Pmf& q, int n, Keep keep) {
  const Pmf pn = product_extend(p, n);
  const Pmf qn = product_extend(q, n);
  double total = 0.0;
  for (Index s = 0; s < pn.size(); ++s)
    if (pn[s] > 0.0 && keep(std::log2(pn[s] / qn[s]) / n)) total += pn[s];
  return total;
}

Pmf pmf2(double a) { return Pmf(Eigen::Vector2d(a, 1.0 - a)); }

}  // namespace

TEST_CASE("type enumeration") {
  CHECK(type_count(2, 5) == 6);
  CHECK(type_count(3, 4) == 15);
  CHECK_THROWS_AS(type_count(10, 1000, 1000), ResourceError);
  int visited = 0;
  std::vector<int> first;
  for_each_type(3, 4, [&](const std::vector<int>& c) {
    if (visited == 0) first = c;
    CHECK(c[0] + c[1] + c[2] == 4);
    ++visited;
  });
  CHECK(visited == 15);
  CHECK(first == std::vector<int>{4, 0, 0});

  const auto [pt, qt] = type_class_pmfs(pmf2(0.7), pmf2(0.5), 3);
  CHECK(pt.size() == 4);
  CHECK(pt[1] == doctest::Approx(3 * 0.49 * 0.3));
  CHECK(qt[1] == doctest::Approx(3 * 0.125));
}

TEST_CASE("divergence series: types agree with the materialized product") {
  PhiloxStream rng(4, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const Index k = 2 + static_cast<Index>(rng.below(2));
    const Pmf p = testing::random_pmf(rng, k);
    const Pmf q = testing::random_pmf(rng, k);
    const double eps = 0.2 * rng.uniform();
    const auto typed = divergence_series(p, q, eps, 6);
    const auto brute = divergence_series(p, q, eps, 6, {false, kDefaultMaxCells});
    for (std::size_t i = 0; i < typed.entries.size(); ++i)
      CHECK(typed.entries[i].value_bits == doctest::Approx(brute.entries[i].value_bits).epsilon(1e-9));
  }
}

TEST_CASE("divergence series properties") {
  const Pmf p = pmf2(0.7), q = pmf2(0.5);
  const auto s = divergence_series(p, q, 0.01, 12);
  CHECK(s.target_bits == doctest::Approx(0.7 * std::log2(1.4) + 0.3 * std::log2(0.6)));
  REQUIRE(s.entries.size() == 12);
  CHECK(s.entries[0].n == 1);
  CHECK(s.entries[0].value_bits == doctest::Approx(smooth_max_divergence(p, q, 0.01).value_bits));

  const auto flat = divergence_series(p, q, 0.0, 8);
  for (const auto& e : flat.entries) CHECK(e.value_bits == doctest::Approx(std::log2(1.4)).epsilon(1e-12));

  const auto same = divergence_series(p, p, 0.05, 10);
  for (std::size_t i = 0; i < same.entries.size(); ++i) {
    CHECK(same.entries[i].value_bits <= 0.0);
    if (i > 0) CHECK(same.entries[i].value_bits >= same.entries[i - 1].value_bits - 1e-12);
  }
  CHECK_THROWS_AS(divergence_series(p, q, 0.01, 30, {false, 1 << 20}), ResourceError);
}

TEST_CASE("entropy series") {
  Eigen::Matrix2d eq;
  eq << 0.5, 0.0, 0.0, 0.5;
  for (const auto& e : entropy_series(JointPmf::from_matrix(eq), 0.0, 5).entries)
    CHECK(e.value_bits == 0.0);
  for (const auto& e : entropy_series(JointPmf({2, 2}, Eigen::Vector4d::Constant(0.25)), 0.0, 5).entries)
    CHECK(e.value_bits == doctest::Approx(1.0));

  const auto d = entropy_series(dsbs(0.25), 0.05, 6);
  CHECK(d.target_bits == doctest::Approx(binary_entropy_bits(0.25)));
  CHECK(d.entries.back().n == 6);
  CHECK_THROWS_AS(entropy_series(dsbs(0.25), 0.05, 5, 256), ResourceError);
}

TEST_CASE("spectral masses against sequence enumeration") {
  PhiloxStream rng(6, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const Index k = 2 + static_cast<Index>(rng.below(2));
    const Pmf p = testing::random_pmf(rng, k, 0.2);
    const Pmf q = testing::random_pmf(rng, k);
    const int n = 1 + static_cast<int>(rng.below(8));
    const double lam = 2.0 * rng.uniform() - 0.5;
    CHECK(spectral_mass(p, q, n, lam) ==
          doctest::Approx(brute_spectral(p, q, n, [&](double v) { return v <= lam; })).epsilon(1e-12));
    CHECK(spectral_tail_mass(p, q, n, lam) ==
          doctest::Approx(brute_spectral(p, q, n, [&](double v) { return v >= lam; })).epsilon(1e-12));
  }
}

TEST_CASE("spectral mass bounds and trends") {
  const Pmf p = pmf2(0.7), q = pmf2(0.5);
  const double d = kl_divergence_bits(p, q);
  CHECK(spectral_mass(p, q, 10, std::log2(1.4)) == doctest::Approx(1.0));
  CHECK(spectral_mass(p, q, 10, std::log2(0.6) - 1e-9) == 0.0);
  const double mid = spectral_mass(p, q, 10, d);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);

  double prev = -1.0;
  for (int k = 0; k <= 20; ++k) {
    const double v = spectral_mass(p, q, 9, -1.0 + 0.1 * k);
    CHECK(v >= prev);
    CHECK(v <= 1.0 + 1e-12);
    prev = v;
  }
  // Just below the top ratio only the all-zeros sequence is excluded.
  CHECK(spectral_mass(p, q, 12, std::log2(1.4) - 1e-9) == doctest::Approx(1.0 - std::pow(0.7, 12)));
  CHECK(spectral_mass(p, q, 12, d + 0.2) > spectral_mass(p, q, 1, d + 0.2));

  CHECK(conditional_spectral_mass(dsbs(0.25), 8, 10.0) == doctest::Approx(1.0));
    CHECK(conditional_spectral_mass(dsbs(0.25), 8, 0.0) == 0.0);
  // Only sequences with no crossovers have surprisal -log2(0.75) per symbol.
  CHECK(conditional_spectral_mass(dsbs(0.25), 8, -std::log2(0.75) + 1e-9) ==
        doctest::Approx(std::pow(0.75, 8)));
}
