#include "oneshot/smooth.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "oneshot/error.hpp"

namespace oneshot {

namespace {

void check_epsilon(double eps, const char* op) {
  if (!(eps >= 0.0) || !(eps < 1.0)) {
    throw UsageError(std::string(op) + ": eps must lie in [0, 1), got " + std::to_string(eps));
  }
}

void check_support(const Pmf& p, const Pmf& q, const char* op) {
  if (p.size() != q.size()) {
    throw UsageError(std::string(op) + ": P and Q have different alphabet sizes (" +
                     std::to_string(p.size()) + " vs " + std::to_string(q.size()) + ")");
  }
  for (Index x = 0; x < p.size(); ++x) {
    if (p[x] > 0.0 && !(q[x] > 0.0)) {
      throw DomainError(std::string(op) + ": Supp(P) is not contained in Supp(Q) at symbol " +
                        std::to_string(x));
    }
  }
}

std::vector<Index> support_of(const Pmf& p) {
  std::vector<Index> s;
  for (Index x = 0; x < p.size(); ++x)
    if (p[x] > 0.0) s.push_back(x);
  return s;
}

SmoothDivergenceResult unsmoothed(const Pmf& p, const Pmf& q, double eps) {
  return {max_divergence(p, q), SubPmf{{p.size()}, p.mass(), p.mass()}, eps};
}

}  // namespace

double max_entropy_h0(const Pmf& p) { return std::log2(static_cast<double>(p.support_size())); }

double max_divergence(const Pmf& p, const Pmf& q) {
  check_support(p, q, "max_divergence");
  double best = 0.0;
  for (Index x = 0; x < p.size(); ++x)
    if (p[x] > 0.0) best = std::max(best, p[x] / q[x]);
  return std::log2(best);
}

SmoothDivergenceResult smooth_max_divergence(const Pmf& p, const Pmf& q, double eps) {
  check_support(p, q, "smooth_max_divergence");
  check_epsilon(eps, "smooth_max_divergence");
  if (eps == 0.0) return unsmoothed(p, q, eps);

  // Breakpoints P/Q in ascending order. Removal needed to cap every ratio at t is
  // g(t) = sum_x (P(x) - t Q(x))^+, linear between consecutive breakpoints.
  std::vector<Index> order = support_of(p);
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    return p[a] / q[a] < p[b] / q[b];
  });
  const std::size_t m = order.size();
  std::vector<double> tail_p(m + 1, 0.0), tail_q(m + 1, 0.0);
  for (std::size_t i = m; i-- > 0;) {
    tail_p[i] = tail_p[i + 1] + p[order[i]];
    tail_q[i] = tail_q[i + 1] + q[order[i]];
  }
  auto ratio = [&](std::size_t i) { return p[order[i]] / q[order[i]]; };
  // First index whose ratio is strictly above that of i.
  auto above = [&](std::size_t i) {
    std::size_t e = i + 1;
    while (e < m && !(ratio(e) > ratio(i))) ++e;
    return e;
  };
  auto removal_at = [&](std::size_t i) {
    const std::size_t e = above(i);
    return tail_p[e] - ratio(i) * tail_q[e];
  };

  // Largest breakpoint whose removal still exceeds eps; t* lies just above it.
  std::size_t lo = 0, hi = m;  // search in [lo, hi)
  std::size_t active = 0;      // first index of the set lowered to t*
  if (removal_at(0) > eps) {
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (removal_at(mid) > eps) lo = mid; else hi = mid;
    }
    active = above(lo);
  }
  const double t = (tail_p[active] - eps) / tail_q[active];

  SubPmf phi{{p.size()}, p.mass(), p.mass()};
  for (std::size_t i = active; i < m; ++i) {
    const Index x = order[i];
    phi.mass[x] = std::min(p[x], t * q[x]);
  }
  return {std::log2(t), std::move(phi), eps};
}

SmoothDivergenceResult smooth_divergence_procedure(const Pmf& p, const Pmf& q, double eps) {
  check_support(p, q, "smooth_divergence_procedure");
  check_epsilon(eps, "smooth_divergence_procedure");
  if (eps == 0.0) return unsmoothed(p, q, eps);

  // Distinct ratio levels, highest first.
  struct Level {
    double ratio;
    double q_mass;
    std::vector<Index> members;
  };
  std::vector<Index> supp = support_of(p);
  std::stable_sort(supp.begin(), supp.end(), [&](Index a, Index b) {
    return p[a] / q[a] > p[b] / q[b];
  });
  std::vector<Level> levels;
  for (Index x : supp) {
    const double r = p[x] / q[x];
    if (levels.empty() || levels.back().ratio != r) levels.push_back({r, 0.0, {}});
    levels.back().q_mass += q[x];
    levels.back().members.push_back(x);
  }

  double r1 = levels.front().ratio;
  double q_top = levels.front().q_mass;
  double spent = 0.0;
  std::size_t merged = 1;
  while (true) {
    if (merged == levels.size()) {
      // Single ratio class: lower everything together until eps is used up.
      r1 -= (eps - spent) / q_top;
      break;
    }
    const double r2 = levels[merged].ratio;
    const double cost = (r1 - r2) * q_top;
    if (spent + cost >= eps) {
      r1 -= (eps - spent) / q_top;
      break;
    }
    spent += cost;
    r1 = r2;
    q_top += levels[merged].q_mass;
    ++merged;
  }

  SubPmf phi{{p.size()}, p.mass(), p.mass()};
  for (std::size_t l = 0; l < merged; ++l)
    for (Index x : levels[l].members) phi.mass[x] = r1 * q[x];
  return {std::log2(r1), std::move(phi), eps};
}

double smooth_divergence_oracle(const Pmf& p, const Pmf& q, double eps, int grid) {
  check_support(p, q, "smooth_divergence_oracle");
  check_epsilon(eps, "smooth_divergence_oracle");
  if (grid < 1) throw UsageError("smooth_divergence_oracle: grid must be positive");

  const double step_bits = kOracleSpanBits / grid;
  const std::vector<Index> supp = support_of(p);
  std::vector<int> rung(supp.size(), 0);
  auto value = [&](std::size_t i, int k) { return p[supp[i]] * std::exp2(-k * step_bits); };

  // Greedy on the current maximum is exact for min-max over monotone ladders:
  // every step it takes is forced for any allocation that beats the current max.
  double spent = 0.0;
  while (true) {
    std::size_t top = 0;
    double top_ratio = -1.0;
    for (std::size_t i = 0; i < supp.size(); ++i) {
      const double r = value(i, rung[i]) / q[supp[i]];
      if (r > top_ratio) {
        top_ratio = r;
        top = i;
      }
    }
    if (rung[top] == grid) break;
    const double cost = value(top, rung[top]) - value(top, rung[top] + 1);
    if (spent + cost > eps) break;
    spent += cost;
    ++rung[top];
  }

  double best = 0.0;
  for (std::size_t i = 0; i < supp.size(); ++i)
    best = std::max(best, value(i, rung[i]) / q[supp[i]]);
  return std::log2(best);
}

SmoothEntropyResult smooth_conditional_h0(const JointPmf& p_xu, double eps) {
  if (p_xu.rank() != 2) throw UsageError("smooth_conditional_h0: joint must be over X x U");
  check_epsilon(eps, "smooth_conditional_h0");
  const Index nx = p_xu.dim(0);
  const Index nu = p_xu.dim(1);

  // Per column: support cells sorted by (mass, symbol) and prefix sums of that order.
  std::vector<std::vector<Index>> order(static_cast<std::size_t>(nu));
  std::vector<std::vector<double>> prefix(static_cast<std::size_t>(nu));
  Index k_max = 0;
  for (Index u = 0; u < nu; ++u) {
    auto& col = order[static_cast<std::size_t>(u)];
    for (Index x = 0; x < nx; ++x)
      if (p_xu(x, u) > 0.0) col.push_back(x);
    std::sort(col.begin(), col.end(), [&](Index a, Index b) {
      return p_xu(a, u) < p_xu(b, u) || (p_xu(a, u) == p_xu(b, u) && a < b);
    });
    auto& pre = prefix[static_cast<std::size_t>(u)];
    pre.assign(col.size() + 1, 0.0);
    for (std::size_t i = 0; i < col.size(); ++i) pre[i + 1] = pre[i] + p_xu(col[i], u);
    k_max = std::max(k_max, static_cast<Index>(col.size()));
  }

  auto cost = [&](Index k) {
    double c = 0.0;
    for (std::size_t u = 0; u < order.size(); ++u) {
      const Index s = static_cast<Index>(order[u].size());
      if (s > k) c += prefix[u][static_cast<std::size_t>(s - k)];
    }
    return c;
  };

  // cost is nonincreasing in k and cost(k_max) = 0.
  Index lo = 1, hi = k_max;
  while (lo < hi) {
    const Index mid = lo + (hi - lo) / 2;
    if (cost(mid) <= eps + kBudgetSlack) hi = mid; else lo = mid + 1;
  }
  const Index k_star = lo;

  SubPmf q{p_xu.dims(), p_xu.mass(), p_xu.mass()};
  for (Index u = 0; u < nu; ++u) {
    const auto& col = order[static_cast<std::size_t>(u)];
    const Index s = static_cast<Index>(col.size());
    for (Index i = 0; i < s - k_star; ++i) q.mass[col[static_cast<std::size_t>(i)] * nu + u] = 0.0;
  }
  return {std::log2(static_cast<double>(k_star)), std::move(q), eps, k_star};
}

double smooth_h0_oracle(const JointPmf& p_xu, double eps) {
  if (p_xu.rank() != 2) throw UsageError("smooth_h0_oracle: joint must be over X x U");
  check_epsilon(eps, "smooth_h0_oracle");
  const Index nx = p_xu.dim(0);
  const Index nu = p_xu.dim(1);
  if (nx * nu > kH0OracleMaxCells) {
    throw ResourceError("smooth_h0_oracle: " + std::to_string(nx * nu) +
                        " cells exceed the exhaustive cap of " + std::to_string(kH0OracleMaxCells));
  }
  const auto cells = static_cast<unsigned>(nx * nu);
  std::vector<std::uint32_t> column_mask(static_cast<std::size_t>(nu), 0);
  std::uint32_t positive = 0;
  for (Index x = 0; x < nx; ++x) {
    for (Index u = 0; u < nu; ++u) {
      const auto bit = std::uint32_t{1} << static_cast<unsigned>(x * nu + u);
      column_mask[static_cast<std::size_t>(u)] |= bit;
      if (p_xu(x, u) > 0.0) positive |= bit;
    }
  }

  const std::size_t subsets = std::size_t{1} << cells;
  std::vector<double> removed(subsets, 0.0);
  int best = std::numeric_limits<int>::max();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    if (mask != 0) {
      const auto low = static_cast<unsigned>(std::countr_zero(mask));
      removed[mask] = removed[mask & (mask - 1)] + p_xu.mass()[low];
    }
    if (removed[mask] > eps + kBudgetSlack) continue;
    const std::uint32_t kept = positive & ~static_cast<std::uint32_t>(mask);
    int widest = 0;
    for (std::uint32_t cm : column_mask) widest = std::max(widest, std::popcount(kept & cm));
    best = std::min(best, widest);
  }
  return std::log2(static_cast<double>(best));
}

}  // namespace oneshot
