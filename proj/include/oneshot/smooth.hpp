#pragma once

#include "oneshot/prob.hpp"

namespace oneshot {

/// Optimal smoothing for the smooth max divergence.
///
/// `smoothing` lies in the eps-ball of P (dominated by P, total mass >= 1 - eps)
/// and keeps the support of P. `value_bits` is log2 max_x phi(x)/Q(x).
struct SmoothDivergenceResult {
  double value_bits = 0.0;
  SubPmf smoothing;
  double epsilon = 0.0;
};

/// Optimal smoothing for the conditional smooth zero-order entropy of X given U.
///
/// `smoothing` is over X x U (axis 0 is X). `max_support` is the largest column
/// support of the smoothing and `value_bits` = log2(max_support).
struct SmoothEntropyResult {
  double value_bits = 0.0;
  SubPmf smoothing;
  double epsilon = 0.0;
  Index max_support = 0;
};

/// log2 |Supp(P)|.
double max_entropy_h0(const Pmf& p);

/// log2 max_{x: P(x)>0} P(x)/Q(x). Throws DomainError when Supp(P) is not inside Supp(Q).
double max_divergence(const Pmf& p, const Pmf& q);

/// Exact smooth max divergence via the threshold form: the smallest t with
/// sum_x (P(x) - t Q(x))^+ <= eps, found by inverting the piecewise-linear
/// removal curve between sorted ratio breakpoints. phi = min(P, t Q).
SmoothDivergenceResult smooth_max_divergence(const Pmf& p, const Pmf& q, double eps);

/// The same optimum reached by the ratio-lowering construction: start from phi = P
/// and lower the top-ratio class in lockstep, merging with the next ratio level
/// whenever it is reached, until eps of mass has been removed.
SmoothDivergenceResult smooth_divergence_procedure(const Pmf& p, const Pmf& q, double eps);

/// Independent upper bound used as a verification oracle.
///
/// Each phi(x) is restricted to the geometric ladder P(x) 2^{-k s}, k = 0..grid,
/// with s = kOracleSpanBits / grid, and the min-max allocation of the eps budget
/// over the ladder is found exactly. The result is within s bits of the true
/// value whenever no optimal phi(x) falls below P(x) 2^{-kOracleSpanBits}.
double smooth_divergence_oracle(const Pmf& p, const Pmf& q, double eps, int grid);

inline constexpr double kOracleSpanBits = 16.0;

/// Conditional smooth zero-order entropy H0^eps(X|U) of a joint over X x U.
///
/// For a target column support k the cheapest smoothing zeroes, in each column,
/// the (s_u - k)^+ smallest entries; the answer is log2 of the smallest k whose
/// cost fits in eps. Ties in mass are zeroed lowest symbol index first.
SmoothEntropyResult smooth_conditional_h0(const JointPmf& p_xu, double eps);

/// Exhaustive oracle for smooth_conditional_h0: tries every subset of cells to zero.
/// Requires |X| |U| <= kH0OracleMaxCells.
double smooth_h0_oracle(const JointPmf& p_xu, double eps);

inline constexpr Index kH0OracleMaxCells = 16;

// Budget comparisons allow this much floating-point slack.
inline constexpr double kBudgetSlack = 1e-12;

}  // namespace oneshot
