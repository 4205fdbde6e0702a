#pragma once

#include <utility>
#include <vector>

#include "oneshot/prob.hpp"

namespace oneshot {

struct SeriesEntry {
  int n = 0;
  double value_bits = 0.0;  // per-symbol value
};

/// Per-symbol smooth quantities on i.i.d. extensions against their Shannon limit.
struct ConvergenceSeries {
  double eps = 0.0;
  std::vector<SeriesEntry> entries;  // n strictly increasing
  double target_bits = 0.0;
};

struct SeriesOptions {
  // Aggregate i.i.d. sequences by type instead of materializing X^n.
  bool type_classes = true;
  std::size_t max_cells = kDefaultMaxCells;
};

/// Number of types (compositions of n into `parts` parts); ResourceError above max_cells.
std::size_t type_count(Index parts, int n, std::size_t max_cells = kDefaultMaxCells);

/// Calls f(counts) for every composition of n into counts.size() parts, in
/// lexicographic order with the first count largest first.
template <typename F>
void for_each_type(Index parts, int n, F&& f) {
  std::vector<int> counts(static_cast<std::size_t>(parts), 0);
  auto rec = [&](auto& self, std::size_t pos, int left) -> void {
    if (pos + 1 == counts.size()) {
      counts[pos] = left;
      f(static_cast<const std::vector<int>&>(counts));
      return;
    }
    for (int c = left; c >= 0; --c) {
      counts[pos] = c;
      self(self, pos + 1, left - c);
    }
  };
  rec(rec, 0, n);
}

/// P^{xn} and Q^{xn} summed over type classes. Each type carries
/// (multinomial count) x (per-sequence mass); per-type ratios equal per-sequence ratios.
std::pair<Pmf, Pmf> type_class_pmfs(const Pmf& p, const Pmf& q, int n,
                                    std::size_t max_cells = kDefaultMaxCells);

/// entries[n] = D^eps_inf(P^{xn} || Q^{xn}) / n, target D(P||Q).
ConvergenceSeries divergence_series(const Pmf& p, const Pmf& q, double eps, int n_max,
                                    const SeriesOptions& options = {});

/// entries[n] = H0^eps(X^n | Y^n) / n on the materialized product, target H(X|Y).
ConvergenceSeries entropy_series(const JointPmf& p_xy, double eps, int n_max,
                                 std::size_t max_cells = kDefaultMaxCells);

/// Pr_{P^{xn}} { (1/n) log2 P^{xn}(x)/Q^{xn}(x) <= lambda }, by type counting.
double spectral_mass(const Pmf& p, const Pmf& q, int n, double lambda);

/// Pr_{P^{xn}} { (1/n) log2 P^{xn}(x)/Q^{xn}(x) >= gamma }, by type counting.
double spectral_tail_mass(const Pmf& p, const Pmf& q, int n, double gamma);

/// Pr { (1/n) log2 1/P(X^n|Y^n) <= alpha } for i.i.d. pairs, by type counting over cells.
double conditional_spectral_mass(const JointPmf& p_xy, int n, double alpha);

}  // namespace oneshot
