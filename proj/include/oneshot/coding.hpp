#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "oneshot/philox.hpp"
#include "oneshot/prob.hpp"
#include "oneshot/region.hpp"

namespace oneshot {

using BoolArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Supp(Q) over X x U for the optimal eps11-smoothing Q of P_XU.
struct SupportSet {
  BoolArray member;  // |X| x |U|

  bool contains(Index x, Index u) const { return member(x, u); }
  Index max_column_support() const { return member.cast<Index>().colwise().sum().maxCoeff(); }
};

/// F = {(u, y) : g(u, y) <= sqrt(eps11)}.
struct CoveringSet {
  BoolArray member;  // |U| x |Y|

  bool contains(Index u, Index y) const { return member(u, y); }
};

SupportSet build_support_set(const JointPmf& p_xu, double eps11);

/// g(u, y) = sum_x P(x|y) 1{(x, u) not in Supp(Q)}; 0 when P_Y(y) = 0.
double g_value(Index u, Index y, const JointPmf& p_xyu, const SupportSet& s);

CoveringSet build_covering_set(const JointPmf& p_xyu, const SupportSet& s, double eps11);

/// Random binning of X plus an i.i.d. P_U covering codebook. Message indices are 1-based.
struct Codebook {
  std::vector<std::uint64_t> bin_of;  // bin in [1, bins] for every x
  std::vector<Index> u_words;         // u(1..M2) stored at 0..M2-1
  std::uint64_t bins = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// ceil(2^rate_bits), at least 1. Throws ResourceError above cap.
std::uint64_t codebook_size(double rate_bits, std::uint64_t cap = kDefaultMaxCells);

Codebook generate_code(const JointPmf& p_xyu, double r1_bits, double r2_bits, std::uint64_t seed,
                       std::uint64_t stream = 0, std::uint64_t cap = kDefaultMaxCells);

// Draws bins then codewords from an existing stream.
Codebook draw_code(const Pmf& p_u, Index x_size, std::uint64_t bins, std::uint64_t words,
                   PhiloxStream& rng);

/// Smallest k with (u(k), y) in F, else 1.
std::uint64_t encode_helper(Index y, const Codebook& cb, const CoveringSet& f);

inline std::uint64_t encode_source(Index x, const Codebook& cb) {
  return cb.bin_of[static_cast<std::size_t>(x)];
}

struct DecodeResult {
  std::optional<Index> symbol;  // set only when exactly one candidate exists
  std::size_t candidates = 0;
};

/// The unique x' in the bin with (x', u(k)) in Supp(Q); failure otherwise.
DecodeResult decode(std::uint64_t bin_index, std::uint64_t helper_index, const Codebook& cb,
                    const SupportSet& s);

enum class CodebookMode { Resample, Fixed };

struct SimConfig {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  std::uint64_t stream_base = 0;  // trial t uses stream stream_base ^ t
  CodebookMode mode = CodebookMode::Resample;
  unsigned threads = 1;
  std::uint64_t max_codewords = kDefaultMaxCells;
};

// The fixed-codebook mode draws its single codebook from this stream.
inline constexpr std::uint64_t kFixedCodebookStream = ~std::uint64_t{0};
inline constexpr std::string_view kStreamRule =
    "key=seed; counter=(block, stream); stream = stream_base XOR trial";

struct SimReport {
  SimConfig config;
  EpsilonBudget budget;
  double r1_bits = 0.0;
  double r2_bits = 0.0;
  double h0_bits = 0.0;
  double divergence_bits = 0.0;
  std::uint64_t bins = 0;
  std::uint64_t codewords = 0;

  std::uint64_t trials = 0;
  std::uint64_t errors_total = 0;
  std::uint64_t e1_count = 0;
  std::uint64_t e2_count = 0;      // E1^c and E2
  std::uint64_t e2_raw_count = 0;  // E2 regardless of E1
  std::uint64_t e3_count = 0;
  std::uint64_t e1_or_e2_count = 0;     // E1 or (E1^c and E2)
  std::uint64_t unexplained_errors = 0;  // decode error with no event
  std::uint64_t benign_events = 0;       // some event fired but x was decoded

  double empirical_error = 0.0;
  double bound_eps = 0.0;
  double smoothing_term = 0.0;  // eps11 + 2 sqrt(eps11)
  double exp_term = 0.0;        // exp(-2^{r2} 2^{-D})
  double binning_term = 0.0;    // 2^{-r1} max_u |Supp(Q(X|U=u))|
  bool exceeds_eps = false;
};

/// Everything the encoders and decoder need, derived once per configuration.
struct CodeSetup {
  JointPmf p_xy;
  JointPmf p_xyu;
  Pmf p_u;
  SupportSet support;
  CoveringSet covering;
};

CodeSetup prepare_code(const JointPmf& p_xy, const Channel& helper, double eps11);

struct TrialOutcome {
  Index x = 0;
  Index y = 0;
  std::uint64_t bin = 0;
  std::uint64_t helper_index = 0;
  DecodeResult decoded;
  bool e1 = false;
  bool e2 = false;
  bool e3 = false;
  bool error = false;
};

/// One source draw through both encoders and the decoder with events classified.
TrialOutcome run_trial(const CodeSetup& setup, const Codebook& cb, PhiloxStream& rng);

SimReport simulate(const JointPmf& p_xy, const Channel& helper, const EpsilonBudget& b,
                   const RatePair& rates, const SimConfig& config);

struct MarkovDraw {
  Index x, y, u;
};

/// (x, y) from P_XY, then u from the helper row of y.
MarkovDraw sample_markov(const JointPmf& p_xy, const Channel& helper, PhiloxStream& rng);

}  // namespace oneshot
