#include "oneshot/asymptotics.hpp"

#include <cmath>
#include <string>

#include "oneshot/error.hpp"
#include "oneshot/smooth.hpp"

namespace oneshot {

namespace {

double log_multinomial(const std::vector<int>& counts, int n) {
  double l = std::lgamma(n + 1.0);
  for (int c : counts) l -= std::lgamma(c + 1.0);
  return l;
}

// Natural-log mass of one sequence of the given type; -inf if it uses a zero-mass symbol.
double log_sequence_mass(const Eigen::VectorXd& mass, const std::vector<int>& counts) {
  double l = 0.0;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if (counts[a] == 0) continue;
    const double m = mass[static_cast<Index>(a)];
    if (m <= 0.0) return -INFINITY;
    l += counts[a] * std::log(m);
  }
  return l;
}

void check_n(int n, const char* op) {
  if (n < 1) throw UsageError(std::string(op) + ": n must be positive");
}

// Sum of P^{xn} mass over types whose summed per-symbol score s(type) passes `keep`.
template <typename Keep>
double type_mass(const Eigen::VectorXd& p, const Eigen::VectorXd& score, int n, Keep keep) {
  double total = 0.0;
  for_each_type(p.size(), n, [&](const std::vector<int>& counts) {
    const double lp = log_sequence_mass(p, counts);
    if (lp == -INFINITY) return;
    double s = 0.0;
    for (std::size_t a = 0; a < counts.size(); ++a)
      if (counts[a] > 0) s += counts[a] * score[static_cast<Index>(a)];
    if (keep(s)) total += std::exp(log_multinomial(counts, n) + lp);
  });
  return total;
}

Eigen::VectorXd log_ratios(const Pmf& p, const Pmf& q) {
  if (p.size() != q.size()) throw UsageError("spectral mass: alphabet mismatch");
  Eigen::VectorXd l = Eigen::VectorXd::Zero(p.size());
  for (Index a = 0; a < p.size(); ++a) {
    if (p[a] == 0.0) continue;
    if (q[a] == 0.0) {
      throw DomainError("spectral mass: Supp(P) is not contained in Supp(Q) at symbol " +
                        std::to_string(a));
    }
    l[a] = std::log2(p[a] / q[a]);
  }
  return l;
}

}  // namespace

std::size_t type_count(Index parts, int n, std::size_t max_cells) {
  // C(n + parts - 1, parts - 1), built incrementally so it stays exact.
  std::size_t c = 1;
  for (Index k = 1; k < parts; ++k) {
    c = c * static_cast<std::size_t>(n + k) / static_cast<std::size_t>(k);
    if (c > max_cells) {
      throw ResourceError("type enumeration exceeds the cap of " + std::to_string(max_cells));
    }
  }
  return c;
}

std::pair<Pmf, Pmf> type_class_pmfs(const Pmf& p, const Pmf& q, int n, std::size_t max_cells) {
  check_n(n, "type_class_pmfs");
  if (p.size() != q.size()) throw UsageError("type_class_pmfs: alphabet mismatch");
  const std::size_t count = type_count(p.size(), n, max_cells);
  Eigen::VectorXd pm(static_cast<Index>(count)), qm(static_cast<Index>(count));
  Index i = 0;
  for_each_type(p.size(), n, [&](const std::vector<int>& counts) {
    const double lm = log_multinomial(counts, n);
    pm[i] = std::exp(lm + log_sequence_mass(p.mass(), counts));
    qm[i] = std::exp(lm + log_sequence_mass(q.mass(), counts));
    ++i;
  });
  return {Pmf(std::move(pm), kProductTolerance), Pmf(std::move(qm), kProductTolerance)};
}

ConvergenceSeries divergence_series(const Pmf& p, const Pmf& q, double eps, int n_max,
                                    const SeriesOptions& options) {
  check_n(n_max, "divergence_series");
  ConvergenceSeries s{eps, {}, kl_divergence_bits(p, q)};
  for (int n = 1; n <= n_max; ++n) {
    double value;
    if (options.type_classes) {
      const auto [pn, qn] = type_class_pmfs(p, q, n, options.max_cells);
      value = smooth_max_divergence(pn, qn, eps).value_bits;
    } else {
      value = smooth_max_divergence(product_extend(p, n, options.max_cells),
                                    product_extend(q, n, options.max_cells), eps)
                  .value_bits;
    }
    s.entries.push_back({n, value / n});
  }
  return s;
}

ConvergenceSeries entropy_series(const JointPmf& p_xy, double eps, int n_max,
                                 std::size_t max_cells) {
  check_n(n_max, "entropy_series");
  if (p_xy.rank() != 2) throw UsageError("entropy_series: joint must be over X x Y");
  ConvergenceSeries s{eps, {}, shannon_quantities(p_xy).h_x_given_y};
  for (int n = 1; n <= n_max; ++n) {
    const JointPmf ext = product_extend(p_xy, n, max_cells);
    s.entries.push_back({n, smooth_conditional_h0(ext, eps).value_bits / n});
  }
  return s;
}

double spectral_mass(const Pmf& p, const Pmf& q, int n, double lambda) {
  check_n(n, "spectral_mass");
  const double bound = n * lambda;
  return type_mass(p.mass(), log_ratios(p, q), n, [&](double s) { return s <= bound; });
}

double spectral_tail_mass(const Pmf& p, const Pmf& q, int n, double gamma) {
  check_n(n, "spectral_tail_mass");
  const double bound = n * gamma;
  return type_mass(p.mass(), log_ratios(p, q), n, [&](double s) { return s >= bound; });
}

double conditional_spectral_mass(const JointPmf& p_xy, int n, double alpha) {
  check_n(n, "conditional_spectral_mass");
  if (p_xy.rank() != 2) throw UsageError("conditional_spectral_mass: joint must be over X x Y");
  const Pmf py = marginal(p_xy, 1);
  const Index ny = p_xy.dim(1);
  Eigen::VectorXd surprisal = Eigen::VectorXd::Zero(p_xy.mass().size());
  for (Index c = 0; c < surprisal.size(); ++c) {
    if (p_xy.mass()[c] > 0.0) surprisal[c] = -std::log2(p_xy.mass()[c] / py[c % ny]);
  }
  const double bound = n * alpha;
  return type_mass(p_xy.mass(), surprisal, n, [&](double s) { return s <= bound; });
}

}  // namespace oneshot
