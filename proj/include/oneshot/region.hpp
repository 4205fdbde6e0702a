#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oneshot/prob.hpp"

namespace oneshot {

/// Error split (eps, eps1, eps11) for the helper rate region.
struct EpsilonBudget {
  double eps = 0.0;
  double eps1 = 0.0;
  double eps11 = 0.0;

  /// eps1 - eps11 - 2 sqrt(eps11), the argument of the helper-rate penalty.
  double slack() const;

  bool operator==(const EpsilonBudget&) const = default;
};

struct BudgetCheck {
  bool valid = true;
  std::vector<std::string> violations;

  explicit operator bool() const { return valid; }
};

/// Checks 0 < eps < 1, eps1 < eps, eps11 + 2 sqrt(eps11) < eps1, nonnegativity,
/// and divergence_bits >= 0. Every violated constraint is named.
BudgetCheck validate_budget(const EpsilonBudget& b, double divergence_bits);

struct RateWitness {
  double h0_bits = 0.0;          // H0^{eps11}(X|U)
  double divergence_bits = 0.0;  // D^{eps11}_inf(P_UY || P_U x P_Y)
  Index max_support = 0;         // 2^{h0_bits}
  EpsilonBudget budget;
  Channel helper;
};

struct RatePair {
  double r1_bits = 0.0;
  double r2_bits = 0.0;
  RateWitness witness;
};

/// The one-shot achievable pair for a fixed helper channel P_{U|Y}:
///   r1 = H0^{eps11}(X|U) - log2(eps - eps1)
///   r2 = D^{eps11}_inf(P_UY || P_U x P_Y) + log2(-ln(eps1 - eps11 - 2 sqrt(eps11)))
/// Throws ConstraintError when the budget fails validation.
RatePair achievable_pair(const JointPmf& p_xy, const Channel& helper, const EpsilonBudget& b);

/// The pieces achievable_pair needs, split out so frontier search can skip
/// channels whose divergence makes the budget invalid without throwing.
struct HelperTerms {
  double h0_bits = 0.0;
  Index max_support = 0;
  double divergence_bits = 0.0;
};
HelperTerms helper_terms(const JointPmf& p_xy, const Channel& helper, double eps11);

/// P_{U|Y} channels whose rows lie on the simplex grid with `grid` points per
/// edge (compositions of grid-1 into u_size parts), in a fixed order.
std::vector<Channel> simplex_channels(Index y_size, Index u_size, int grid);

/// eps1 = eps/2 and eps11 in {eps1^2/16, eps1^2/64}.
std::vector<EpsilonBudget> default_budget_grid(double eps);

struct FrontierPoint {
  RatePair rates;
  std::size_t evaluation_index = 0;  // position in (channel, budget) enumeration order

  const Channel& helper() const { return rates.witness.helper; }
  const EpsilonBudget& budget() const { return rates.witness.budget; }
};

struct FrontierOptions {
  unsigned threads = 1;
};

/// Pareto-minimal (r1, r2) pairs over all grid helpers and valid budgets,
/// sorted by r1. Among exactly equal pairs the first evaluated is kept.
std::vector<FrontierPoint> frontier_search(const JointPmf& p_xy, Index u_size, int channel_grid,
                                           std::span<const EpsilonBudget> budgets,
                                           const FrontierOptions& options = {});

struct WynerPoint {
  double h_x_given_u = 0.0;
  double i_u_y = 0.0;
};

WynerPoint wyner_point(const JointPmf& p_xy, const Channel& helper);

}  // namespace oneshot
