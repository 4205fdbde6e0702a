#include "oneshot/coding.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "oneshot/error.hpp"
#include "oneshot/smooth.hpp"

namespace oneshot {

SupportSet build_support_set(const JointPmf& p_xu, double eps11) {
  const SmoothEntropyResult h0 = smooth_conditional_h0(p_xu, eps11);
  const Index nx = p_xu.dim(0);
  const Index nu = p_xu.dim(1);
  SupportSet s{BoolArray(nx, nu)};
  for (Index x = 0; x < nx; ++x)
    for (Index u = 0; u < nu; ++u) s.member(x, u) = h0.smoothing.mass[x * nu + u] > 0.0;
  return s;
}

double g_value(Index u, Index y, const JointPmf& p_xyu, const SupportSet& s) {
  const std::size_t xy[] = {0, 1};
  const ConditionalSlice x_given_y = condition(marginalize(p_xyu, xy), 1, y);
  if (x_given_y.degenerate) return 0.0;
  double g = 0.0;
  for (Index x = 0; x < x_given_y.mass.size(); ++x)
    if (!s.contains(x, u)) g += x_given_y.mass[x];
  return g;
}

CoveringSet build_covering_set(const JointPmf& p_xyu, const SupportSet& s, double eps11) {
  const Index nu = p_xyu.dim(2);
  const Index ny = p_xyu.dim(1);
  const double threshold = std::sqrt(eps11);
  CoveringSet f{BoolArray(nu, ny)};
  for (Index u = 0; u < nu; ++u)
    for (Index y = 0; y < ny; ++y) f.member(u, y) = g_value(u, y, p_xyu, s) <= threshold;
  return f;
}

std::uint64_t codebook_size(double rate_bits, std::uint64_t cap) {
  if (std::isnan(rate_bits)) throw UsageError("codebook_size: rate is NaN");
  const double size = std::ceil(std::exp2(rate_bits));
  if (!(size <= static_cast<double>(cap))) {
    throw ResourceError("codebook of 2^" + std::to_string(rate_bits) +
                        " entries exceeds the cap of " + std::to_string(cap));
  }
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(size));
}

Codebook draw_code(const Pmf& p_u, Index x_size, std::uint64_t bins, std::uint64_t words,
                   PhiloxStream& rng) {
  Codebook cb;
  cb.bins = bins;
  cb.seed = rng.seed();
  cb.stream = rng.stream();
  cb.bin_of.resize(static_cast<std::size_t>(x_size));
  for (auto& b : cb.bin_of) b = 1 + rng.below(bins);
  cb.u_words.resize(static_cast<std::size_t>(words));
  for (auto& u : cb.u_words) u = rng.sample(p_u.mass());
  return cb;
}

Codebook generate_code(const JointPmf& p_xyu, double r1_bits, double r2_bits, std::uint64_t seed,
                       std::uint64_t stream, std::uint64_t cap) {
  if (p_xyu.rank() != 3) throw UsageError("generate_code: expected a joint over X x Y x U");
  const std::uint64_t bins = codebook_size(r1_bits, cap);
  const std::uint64_t words = codebook_size(r2_bits, cap);
  PhiloxStream rng(seed, stream);
  return draw_code(marginal(p_xyu, 2), p_xyu.dim(0), bins, words, rng);
}

std::uint64_t encode_helper(Index y, const Codebook& cb, const CoveringSet& f) {
  for (std::size_t k = 0; k < cb.u_words.size(); ++k)
    if (f.contains(cb.u_words[k], y)) return k + 1;
  return 1;
}

DecodeResult decode(std::uint64_t bin_index, std::uint64_t helper_index, const Codebook& cb,
                    const SupportSet& s) {
  if (helper_index < 1 || helper_index > cb.u_words.size()) {
    throw UsageError("decode: helper index " + std::to_string(helper_index) + " out of range");
  }
  if (bin_index < 1 || bin_index > cb.bins) {
    throw UsageError("decode: bin index " + std::to_string(bin_index) + " out of range");
  }
  const Index u = cb.u_words[helper_index - 1];
  DecodeResult r;
  for (std::size_t x = 0; x < cb.bin_of.size(); ++x) {
    if (cb.bin_of[x] == bin_index && s.contains(static_cast<Index>(x), u)) {
      ++r.candidates;
      r.symbol = static_cast<Index>(x);
    }
  }
  if (r.candidates != 1) r.symbol.reset();
  return r;
}

CodeSetup prepare_code(const JointPmf& p_xy, const Channel& helper, double eps11) {
  JointPmf p_xyu = compose_markov(p_xy, helper);
  const std::size_t xu[] = {0, 2};
  SupportSet support = build_support_set(marginalize(p_xyu, xu), eps11);
  CoveringSet covering = build_covering_set(p_xyu, support, eps11);
  Pmf p_u = marginal(p_xyu, 2);
  return {p_xy, std::move(p_xyu), std::move(p_u), std::move(support), std::move(covering)};
}

TrialOutcome run_trial(const CodeSetup& setup, const Codebook& cb, PhiloxStream& rng) {
  TrialOutcome t;
  const Index cell = rng.sample(setup.p_xy.mass());
  t.x = cell / setup.p_xy.dim(1);
  t.y = cell % setup.p_xy.dim(1);

  t.bin = encode_source(t.x, cb);
  t.helper_index = encode_helper(t.y, cb, setup.covering);
  t.decoded = decode(t.bin, t.helper_index, cb, setup.support);
  t.error = t.decoded.symbol != t.x;

  const Index u = cb.u_words[t.helper_index - 1];
  t.e1 = std::none_of(cb.u_words.begin(), cb.u_words.end(),
                      [&](Index w) { return setup.covering.contains(w, t.y); });
  t.e2 = !setup.support.contains(t.x, u);
  for (std::size_t x = 0; x < cb.bin_of.size() && !t.e3; ++x) {
    t.e3 = static_cast<Index>(x) != t.x && cb.bin_of[x] == t.bin &&
           setup.support.contains(static_cast<Index>(x), u);
  }
  return t;
}

namespace {

struct Tally {
  std::uint64_t trials = 0, errors = 0, e1 = 0, e2 = 0, e2_raw = 0, e3 = 0, e1_or_e2 = 0,
                unexplained = 0, benign = 0;

  void add(const TrialOutcome& t) {
    ++trials;
    errors += t.error;
    e1 += t.e1;
    e2 += !t.e1 && t.e2;
    e2_raw += t.e2;
    e3 += t.e3;
    e1_or_e2 += t.e1 || t.e2;
    const bool any = t.e1 || t.e2 || t.e3;
    unexplained += t.error && !any;
    benign += any && !t.error;
  }

  Tally& operator+=(const Tally& o) {
    trials += o.trials;
    errors += o.errors;
    e1 += o.e1;
    e2 += o.e2;
    e2_raw += o.e2_raw;
    e3 += o.e3;
    e1_or_e2 += o.e1_or_e2;
    unexplained += o.unexplained;
    benign += o.benign;
    return *this;
  }
};

}  // namespace

SimReport simulate(const JointPmf& p_xy, const Channel& helper, const EpsilonBudget& b,
                   const RatePair& rates, const SimConfig& config) {
  if (config.trials < 1) throw UsageError("simulate: trials must be at least 1");
  BudgetCheck check = validate_budget(b, rates.witness.divergence_bits);
  if (!check) throw ConstraintError("invalid epsilon budget", std::move(check.violations));

  const CodeSetup setup = prepare_code(p_xy, helper, b.eps11);
  const std::uint64_t bins = codebook_size(rates.r1_bits, config.max_codewords);
  const std::uint64_t words = codebook_size(rates.r2_bits, config.max_codewords);

  std::optional<Codebook> fixed;
  if (config.mode == CodebookMode::Fixed) {
    PhiloxStream rng(config.seed, kFixedCodebookStream);
    fixed = draw_code(setup.p_u, p_xy.dim(0), bins, words, rng);
  }

  auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
    Tally tally;
    for (std::uint64_t t = begin; t < end; ++t) {
      PhiloxStream rng(config.seed, config.stream_base ^ t);
      if (fixed) {
        tally.add(run_trial(setup, *fixed, rng));
      } else {
        const Codebook cb = draw_code(setup.p_u, p_xy.dim(0), bins, words, rng);
        tally.add(run_trial(setup, cb, rng));
      }
    }
    return tally;
  };

  Tally total;
  const unsigned threads =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, config.threads), config.trials));
  if (threads == 1) {
    total = run_range(0, config.trials);
  } else {
    std::vector<Tally> parts(threads);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (config.trials + threads - 1) / threads;
    for (unsigned i = 0; i < threads; ++i) {
      const std::uint64_t begin = std::min(config.trials, i * chunk);
      const std::uint64_t end = std::min(config.trials, begin + chunk);
      pool.emplace_back([&, i, begin, end] { parts[i] = run_range(begin, end); });
    }
    for (auto& th : pool) th.join();
    for (const auto& p : parts) total += p;
  }

  SimReport r;
  r.config = config;
  r.budget = b;
  r.r1_bits = rates.r1_bits;
  r.r2_bits = rates.r2_bits;
  r.h0_bits = rates.witness.h0_bits;
  r.divergence_bits = rates.witness.divergence_bits;
  r.bins = bins;
  r.codewords = words;
  r.trials = total.trials;
  r.errors_total = total.errors;
  r.e1_count = total.e1;
  r.e2_count = total.e2;
  r.e2_raw_count = total.e2_raw;
  r.e3_count = total.e3;
  r.e1_or_e2_count = total.e1_or_e2;
  r.unexplained_errors = total.unexplained;
  r.benign_events = total.benign;
  r.empirical_error = static_cast<double>(total.errors) / static_cast<double>(total.trials);
  r.bound_eps = b.eps;
  r.smoothing_term = b.eps11 + 2.0 * std::sqrt(b.eps11);
  r.exp_term = std::exp(-std::exp2(rates.r2_bits - rates.witness.divergence_bits));
  r.binning_term = std::exp2(-rates.r1_bits) * static_cast<double>(rates.witness.max_support);
  r.exceeds_eps = r.empirical_error > b.eps;
  return r;
}

MarkovDraw sample_markov(const JointPmf& p_xy, const Channel& helper, PhiloxStream& rng) {
  const Index cell = rng.sample(p_xy.mass());
  const Index y = cell % p_xy.dim(1);
  const Index u = rng.sample(helper.matrix().row(y).transpose());
  return {cell / p_xy.dim(1), y, u};
}

}  // namespace oneshot
