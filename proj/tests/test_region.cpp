#include <doctest.h>

#include <cmath>

#include "oneshot/error.hpp"
#include "oneshot/region.hpp"
#include "oneshot/smooth.hpp"
#include "random_instances.hpp"

using namespace oneshot;

namespace {

bool dominates(const RatePair& a, const RatePair& b) {
  return a.r1_bits <= b.r1_bits && a.r2_bits <= b.r2_bits &&
         (a.r1_bits < b.r1_bits || a.r2_bits < b.r2_bits);
}

bool mentions(const BudgetCheck& c, const std::string& needle) {
  for (const auto& v : c.violations)
    if (v.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("budget validation names every violation") {
  CHECK(validate_budget({0.25, 0.125, 0.002}, 0.5).valid);

  const BudgetCheck tight = validate_budget({0.2, 0.19, 0.01}, 0.5);
  CHECK_FALSE(tight.valid);
  CHECK(tight.violations.size() == 1);

  const BudgetCheck neg = validate_budget({0.25, 0.125, 0.002}, -0.1);
  CHECK_FALSE(neg.valid);
  CHECK(mentions(neg, "divergence"));

  const BudgetCheck many = validate_budget({1.5, 2.0, -0.1}, -1.0);
  CHECK_FALSE(many.valid);
  CHECK(many.violations.size() >= 4);
  CHECK(mentions(many, "eps1"));
  CHECK(mentions(many, "eps11"));

  CHECK_FALSE(validate_budget({0.0, 0.0, 0.0}, 0.0).valid);
}

TEST_CASE("achievable pair: identity helper on an independent uniform source") {
  const JointPmf uni({2, 2}, Eigen::Vector4d::Constant(0.25));
  const RatePair r = achievable_pair(uni, Channel::identity(2), {0.25, 0.125, 0.002});
  CHECK(r.witness.h0_bits == 1.0);
  CHECK(r.r1_bits == doctest::Approx(4.0).epsilon(1e-12));
  // P_UY sits on the diagonal with mass 0.5 each against a product of 0.25.
  const double d = smooth_max_divergence(Pmf(Eigen::Vector4d(0.5, 0, 0, 0.5)),
                                         Pmf::uniform(4), 0.002)
                       .value_bits;
  CHECK(r.witness.divergence_bits == doctest::Approx(d).epsilon(1e-12));
  CHECK(d == doctest::Approx(std::log2(1.996)).epsilon(1e-12));
  const double slack = 0.125 - 0.002 - 2.0 * std::sqrt(0.002);
  CHECK(r.r2_bits == doctest::Approx(d + std::log2(-std::log(slack))).epsilon(1e-12));
}

TEST_CASE("achievable pair: DSBS with a noisy helper against oracle composition") {
  const JointPmf p = dsbs(0.25);
  const EpsilonBudget b{0.25, 0.125, 0.002};
  const RatePair r = achievable_pair(p, Channel::binary_symmetric(0.1), b);

  // X given U is BSC(0.3): masses 0.35/0.15 in each column, all above eps11.
  Eigen::Vector4d xu(0.35, 0.15, 0.15, 0.35);
  const double h0 = smooth_h0_oracle(JointPmf({2, 2}, xu), b.eps11);
  // U given Y is BSC(0.1) with uniform marginals.
  Eigen::Vector4d uy(0.45, 0.05, 0.05, 0.45);
  const double d = smooth_divergence_oracle(Pmf(uy), Pmf::uniform(4), b.eps11, 10000);

  CHECK(r.r1_bits == doctest::Approx(h0 - std::log2(b.eps - b.eps1)).epsilon(1e-12));
  CHECK(r.witness.divergence_bits <= d);
  CHECK(d - r.witness.divergence_bits <= kOracleSpanBits / 10000);
  CHECK(r.witness.divergence_bits == doctest::Approx(std::log2(1.796)).epsilon(1e-12));
  CHECK(r.witness.max_support == 2);
}

TEST_CASE("constant helper: smoothing pushes the divergence below zero") {
  PhiloxStream rng(9, 0);
  const JointPmf p({3, 2}, testing::random_mass(rng, 6));
  const HelperTerms t = helper_terms(p, Channel::constant(2), 0.002);
  // P_UY equals P_U x P_Y, so the eps11-smooth divergence is log2(1 - eps11).
  CHECK(t.divergence_bits == doctest::Approx(std::log2(0.998)).epsilon(1e-12));
  CHECK(t.h0_bits == std::log2(3.0));
  CHECK(helper_terms(p, Channel::constant(2), 0.0).divergence_bits == 0.0);
  // The divergence >= 0 requirement then rejects the pair.
  CHECK_THROWS_AS(achievable_pair(p, Channel::constant(2), {0.25, 0.125, 0.002}), ConstraintError);
}

TEST_CASE("achievable pair rejects bad budgets") {
  const JointPmf p = dsbs(0.25);
  CHECK_THROWS_AS(achievable_pair(p, Channel::identity(2), {0.2, 0.19, 0.01}), ConstraintError);
  try {
    achievable_pair(p, Channel::identity(2), {0.2, 0.3, 0.01});
    FAIL("expected a constraint error");
  } catch (const ConstraintError& e) {
    CHECK_FALSE(e.diagnostics().empty());
  }
}

TEST_CASE("budget effect: larger eps lowers r1 and leaves r2") {
  const JointPmf p = dsbs(0.2);
  const Channel w = Channel::binary_symmetric(0.05);
  const RatePair a = achievable_pair(p, w, {0.2, 0.1, 0.001});
  const RatePair b = achievable_pair(p, w, {0.3, 0.1, 0.001});
  CHECK(b.r1_bits < a.r1_bits);
  CHECK(b.r2_bits == a.r2_bits);
}

TEST_CASE("achievable pair is bit-reproducible") {
  const JointPmf p = dsbs(0.3);
  const Channel w = Channel::binary_symmetric(0.2);
  const RatePair a = achievable_pair(p, w, {0.3, 0.15, 0.001});
  const RatePair b = achievable_pair(p, w, {0.3, 0.15, 0.001});
  CHECK(a.r1_bits == b.r1_bits);
  CHECK(a.r2_bits == b.r2_bits);
}

TEST_CASE("simplex channels and default budgets") {
  const auto chans = simplex_channels(2, 2, 3);
  // Three rows per y, two y's.
  CHECK(chans.size() == 9);
  for (const auto& c : chans) CHECK((c.matrix().rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-15);
  CHECK(simplex_channels(3, 1, 5).size() == 1);
  CHECK_THROWS_AS(simplex_channels(2, 2, 1), UsageError);

  const auto budgets = default_budget_grid(0.2);
  REQUIRE(budgets.size() == 2);
  for (const auto& b : budgets) {
    CHECK(b.eps1 == doctest::Approx(0.1));
    CHECK(validate_budget(b, 0.0).valid);
  }
}

TEST_CASE("frontier is pareto-minimal and covers the identity helper") {
  const JointPmf p = dsbs(0.25);
  const EpsilonBudget b{0.25, 0.125, 0.002};
  const EpsilonBudget budgets[] = {b};
  const auto front = frontier_search(p, 2, 11, budgets);
  REQUIRE_FALSE(front.empty());
  for (const auto& a : front)
    for (const auto& c : front) CHECK_FALSE(dominates(a.rates, c.rates));
  for (std::size_t i = 1; i < front.size(); ++i)
    CHECK(front[i - 1].rates.r1_bits <= front[i].rates.r1_bits);

  const RatePair id = achievable_pair(p, Channel::identity(2), b);
  bool covered = false;
  for (const auto& f : front)
    covered |= f.rates.r1_bits <= id.r1_bits && f.rates.r2_bits <= id.r2_bits;
  CHECK(covered);

  // Every evaluated pair is dominated by or equal to some frontier point.
  for (const Channel& w : simplex_channels(2, 2, 11)) {
    const HelperTerms t = helper_terms(p, w, b.eps11);
    if (!validate_budget(b, t.divergence_bits)) continue;
    const RatePair r = achievable_pair(p, w, b);
    bool ok = false;
    for (const auto& f : front)
      ok |= f.rates.r1_bits <= r.r1_bits && f.rates.r2_bits <= r.r2_bits;
    CHECK(ok);
  }

  // |U| = 1 has a single channel whose smoothed divergence is negative.
  CHECK(frontier_search(p, 1, 5, budgets).empty());
  const EpsilonBudget exact[] = {{0.25, 0.125, 0.0}};
  CHECK(frontier_search(p, 1, 5, exact).size() == 1);
  CHECK_THROWS_AS(frontier_search(p, 2, 5, {}), UsageError);
}

TEST_CASE("frontier does not depend on the thread count") {
  const JointPmf p = dsbs(0.15);
  const auto budgets = default_budget_grid(0.3);
  const auto a = frontier_search(p, 3, 6, budgets, {1});
  const auto b = frontier_search(p, 3, 6, budgets, {4});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].rates.r1_bits == b[i].rates.r1_bits);
    CHECK(a[i].rates.r2_bits == b[i].rates.r2_bits);
    CHECK(a[i].evaluation_index == b[i].evaluation_index);
  }
}

TEST_CASE("wyner point") {
  const JointPmf p = dsbs(0.25);
  const WynerPoint id = wyner_point(p, Channel::identity(2));
  CHECK(id.h_x_given_u == doctest::Approx(binary_entropy_bits(0.25)));
  CHECK(id.i_u_y == doctest::Approx(1.0));
  const WynerPoint c = wyner_point(p, Channel::constant(2));
  CHECK(c.h_x_given_u == doctest::Approx(1.0));
  CHECK(c.i_u_y == doctest::Approx(0.0));
  const WynerPoint n = wyner_point(p, Channel::binary_symmetric(0.1));
  CHECK(n.h_x_given_u == doctest::Approx(binary_entropy_bits(0.3)));
  CHECK(n.i_u_y == doctest::Approx(1.0 - binary_entropy_bits(0.1)));
}
