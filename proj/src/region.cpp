#include "oneshot/region.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>

#include "oneshot/error.hpp"
#include "oneshot/smooth.hpp"

namespace oneshot {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void compositions(int total, Index parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<Index>(cur.size()) + 1 == parts) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = total; k >= 0; --k) {
    cur.push_back(k);
    compositions(total - k, parts, cur, out);
    cur.pop_back();
  }
}

}  // namespace

double EpsilonBudget::slack() const { return eps1 - eps11 - 2.0 * std::sqrt(eps11); }

BudgetCheck validate_budget(const EpsilonBudget& b, double divergence_bits) {
  BudgetCheck check;
  auto fail = [&](std::string msg) {
    check.valid = false;
    check.violations.push_back(std::move(msg));
  };
  if (!(b.eps >= 0.0) || !(b.eps1 >= 0.0) || !(b.eps11 >= 0.0)) {
    fail("eps, eps1 and eps11 must be nonnegative (got " + num(b.eps) + ", " + num(b.eps1) +
         ", " + num(b.eps11) + ")");
  }
  if (!(b.eps > 0.0 && b.eps < 1.0)) fail("eps must satisfy 0 < eps < 1 (got " + num(b.eps) + ")");
  if (!(b.eps1 < b.eps)) {
    fail("eps1 must be < eps (got eps1=" + num(b.eps1) + ", eps=" + num(b.eps) + ")");
  }
  if (b.eps11 >= 0.0) {
    const double lhs = b.eps11 + 2.0 * std::sqrt(b.eps11);
    if (!(lhs < b.eps1)) {
      fail("eps11 + 2*sqrt(eps11) must be < eps1 (got " + num(lhs) + " >= " + num(b.eps1) + ")");
    }
  }
  if (!(divergence_bits >= 0.0)) {
    fail("smoothed divergence D^eps11(P_UY||P_U x P_Y) must be >= 0 (got " + num(divergence_bits) +
         ")");
  }
  return check;
}

HelperTerms helper_terms(const JointPmf& p_xy, const Channel& helper, double eps11) {
  const JointPmf p_xyu = compose_markov(p_xy, helper);
  const std::size_t xu[] = {0, 2};
  const std::size_t uy[] = {2, 1};
  const JointPmf p_xu = marginalize(p_xyu, xu);
  const JointPmf p_uy = marginalize(p_xyu, uy);
  const Pmf product = independent_joint(marginal(p_uy, 0), marginal(p_uy, 1)).flatten();

  const SmoothEntropyResult h0 = smooth_conditional_h0(p_xu, eps11);
  const SmoothDivergenceResult d = smooth_max_divergence(p_uy.flatten(), product, eps11);
  return {h0.value_bits, h0.max_support, d.value_bits};
}

RatePair achievable_pair(const JointPmf& p_xy, const Channel& helper, const EpsilonBudget& b) {
  BudgetCheck pre = validate_budget(b, 0.0);
  if (!pre) throw ConstraintError("invalid epsilon budget", std::move(pre.violations));

  const HelperTerms terms = helper_terms(p_xy, helper, b.eps11);
  BudgetCheck check = validate_budget(b, terms.divergence_bits);
  if (!check) throw ConstraintError("invalid epsilon budget", std::move(check.violations));

  const double slack = b.slack();
  if (!(slack > 0.0 && slack < 1.0)) {
    throw ConstraintError("helper-rate penalty undefined",
                          {"eps1 - eps11 - 2*sqrt(eps11) must lie in (0, 1) (got " + num(slack) + ")"});
  }
  RatePair pair{terms.h0_bits - std::log2(b.eps - b.eps1),
                terms.divergence_bits + std::log2(-std::log(slack)),
                RateWitness{terms.h0_bits, terms.divergence_bits, terms.max_support, b, helper}};
  return pair;
}

std::vector<Channel> simplex_channels(Index y_size, Index u_size, int grid) {
  if (u_size < 1) throw UsageError("simplex_channels: u_size must be at least 1");
  if (grid < 2) throw UsageError("simplex_channels: channel grid must be at least 2");
  std::vector<std::vector<int>> rows;
  std::vector<int> cur;
  compositions(grid - 1, u_size, cur, rows);

  std::size_t count = 1;
  for (Index y = 0; y < y_size; ++y) {
    if (count > kDefaultMaxCells / rows.size()) {
      throw ResourceError("simplex_channels: too many grid channels");
    }
    count *= rows.size();
  }

  std::vector<Channel> out;
  out.reserve(count);
  std::vector<std::size_t> pick(static_cast<std::size_t>(y_size), 0);
  const double scale = 1.0 / static_cast<double>(grid - 1);
  for (std::size_t c = 0; c < count; ++c) {
    Eigen::MatrixXd w(y_size, u_size);
    for (Index y = 0; y < y_size; ++y) {
      const auto& r = rows[pick[static_cast<std::size_t>(y)]];
      for (Index u = 0; u < u_size; ++u) w(y, u) = r[static_cast<std::size_t>(u)] * scale;
    }
    out.emplace_back(std::move(w), 1e-12);
    // Odometer with the last row fastest.
    for (std::size_t y = pick.size(); y-- > 0;) {
      if (++pick[y] < rows.size()) break;
      pick[y] = 0;
    }
  }
  return out;
}

std::vector<EpsilonBudget> default_budget_grid(double eps) {
  const double eps1 = eps / 2.0;
  return {{eps, eps1, eps1 * eps1 / 16.0}, {eps, eps1, eps1 * eps1 / 64.0}};
}

std::vector<FrontierPoint> frontier_search(const JointPmf& p_xy, Index u_size, int channel_grid,
                                           std::span<const EpsilonBudget> budgets,
                                           const FrontierOptions& options) {
  if (budgets.empty()) throw UsageError("frontier_search: budget list is empty");
  if (p_xy.rank() != 2) throw UsageError("frontier_search: P_XY must have exactly 2 axes");
  const std::vector<Channel> channels = simplex_channels(p_xy.dim(1), u_size, channel_grid);
  const std::size_t nb = budgets.size();
  std::vector<std::optional<FrontierPoint>> cells(channels.size() * nb);

  auto evaluate = [&](std::size_t c) {
    for (std::size_t b = 0; b < nb; ++b) {
      const EpsilonBudget& budget = budgets[b];
      if (!validate_budget(budget, 0.0)) continue;
      const HelperTerms t = helper_terms(p_xy, channels[c], budget.eps11);
      if (!validate_budget(budget, t.divergence_bits)) continue;
      const std::size_t idx = c * nb + b;
      cells[idx] = FrontierPoint{
          RatePair{t.h0_bits - std::log2(budget.eps - budget.eps1),
                   t.divergence_bits + std::log2(-std::log(budget.slack())),
                   RateWitness{t.h0_bits, t.divergence_bits, t.max_support, budget, channels[c]}},
          idx};
    }
  };

  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    for (std::size_t c = 0; c < channels.size(); ++c) evaluate(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < channels.size(); c = next++) evaluate(c);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::vector<FrontierPoint> valid;
  for (auto& cell : cells)
    if (cell) valid.push_back(std::move(*cell));
  std::sort(valid.begin(), valid.end(), [](const FrontierPoint& a, const FrontierPoint& b) {
    if (a.rates.r1_bits != b.rates.r1_bits) return a.rates.r1_bits < b.rates.r1_bits;
    if (a.rates.r2_bits != b.rates.r2_bits) return a.rates.r2_bits < b.rates.r2_bits;
    return a.evaluation_index < b.evaluation_index;
  });
  std::vector<FrontierPoint> frontier;
  for (auto& pt : valid) {
    if (frontier.empty() || pt.rates.r2_bits < frontier.back().rates.r2_bits) {
      frontier.push_back(std::move(pt));
    }
  }
  return frontier;
}

WynerPoint wyner_point(const JointPmf& p_xy, const Channel& helper) {
  const JointPmf p_xyu = compose_markov(p_xy, helper);
  return {conditional_entropy_bits(p_xyu, 0, 2), mutual_information_bits(p_xyu, 2, 1)};
}

}  // namespace oneshot
