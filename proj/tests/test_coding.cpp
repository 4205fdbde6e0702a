#include <doctest.h>

#include <cmath>

#include "oneshot/coding.hpp"
#include "oneshot/error.hpp"
#include "random_instances.hpp"

using namespace oneshot;

namespace {

SupportSet full_support(Index nx, Index nu) { return {BoolArray::Constant(nx, nu, true)}; }

}  // namespace

TEST_CASE("support set follows the optimal smoothing") {
  PhiloxStream rng(1, 0);
  const JointPmf p({3, 2}, testing::random_mass(rng, 6, 0.3));
  const SupportSet s0 = build_support_set(p, 0.0);
  for (Index x = 0; x < 3; ++x)
    for (Index u = 0; u < 2; ++u) CHECK(s0.contains(x, u) == (p(x, u) > 0.0));

  // Zeroing one 0.25 cell cannot lower the max column support below 2, so nothing is zeroed.
  const SupportSet uni = build_support_set(JointPmf({2, 2}, Eigen::Vector4d::Constant(0.25)), 0.3);
  CHECK(uni.max_column_support() == 2);
  CHECK(uni.member.all());

  Eigen::VectorXd m(6);
  m << 0.4, 0.25, 0.3, 0.0, 0.05, 0.0;
  const SupportSet s = build_support_set(JointPmf({3, 2}, m), 0.05);
  CHECK_FALSE(s.contains(2, 0));
  CHECK(s.contains(0, 0));
  CHECK(s.contains(1, 0));
  CHECK(s.max_column_support() == 2);
}

TEST_CASE("g and the covering set") {
  const JointPmf p_xy({2, 2}, Eigen::Vector4d::Constant(0.25));
  const JointPmf p_xyu = compose_markov(p_xy, Channel::identity(2));
  const SupportSet all = full_support(2, 2);
  SupportSet none{BoolArray::Constant(2, 2, false)};
  SupportSet one = all;
  one.member(1, 0) = false;
  for (Index u = 0; u < 2; ++u) {
    for (Index y = 0; y < 2; ++y) {
      CHECK(g_value(u, y, p_xyu, all) == 0.0);
      CHECK(g_value(u, y, p_xyu, none) == 1.0);
    }
  }
  CHECK(g_value(0, 0, p_xyu, one) == doctest::Approx(0.5));
  CHECK(g_value(1, 0, p_xyu, one) == 0.0);

  const CoveringSet f = build_covering_set(p_xyu, one, 0.2);
  CHECK_FALSE(f.contains(0, 0));
  CHECK(f.contains(1, 0));
  // The threshold is inclusive: g = 0.5 = sqrt(0.25).
  CHECK(build_covering_set(p_xyu, one, 0.25).contains(0, 0));

  // y with P_Y(y) = 0 gets g = 0 and is covered.
  Eigen::Matrix2d z;
  z << 0.5, 0.0, 0.5, 0.0;
  const JointPmf zy = compose_markov(JointPmf::from_matrix(z), Channel::identity(2));
  CHECK(g_value(0, 1, zy, none) == 0.0);
}

TEST_CASE("codebook generation") {
  const JointPmf p_xyu = compose_markov(dsbs(0.25), Channel::binary_symmetric(0.1));
  const Codebook a = generate_code(p_xyu, 1.5, 2.2, 99);
  const Codebook b = generate_code(p_xyu, 1.5, 2.2, 99);
  CHECK(a.bin_of == b.bin_of);
  CHECK(a.u_words == b.u_words);
  CHECK(a.bins == 3);
  CHECK(a.u_words.size() == 5);
  for (auto bin : a.bin_of) {
    CHECK(bin >= 1);
    CHECK(bin <= 3);
  }
  CHECK(generate_code(p_xyu, 3.0, 0.0, 1).u_words.size() == 1);
  CHECK(codebook_size(2.0) == 4);
  CHECK(codebook_size(2.0000001) == 5);
  CHECK(codebook_size(-3.0) == 1);
  CHECK_THROWS_AS(codebook_size(30.0, 1 << 24), ResourceError);
  CHECK_THROWS_AS(generate_code(p_xyu, 40.0, 1.0, 1), ResourceError);
}

TEST_CASE("helper encoder picks the smallest covering word") {
  Codebook cb;
  cb.u_words = {0, 1, 1};
  CoveringSet all{BoolArray::Constant(2, 2, true)};
  CoveringSet none{BoolArray::Constant(2, 2, false)};
  CoveringSet only_b{BoolArray::Constant(2, 2, false)};
  only_b.member(1, 0) = true;
  CHECK(encode_helper(0, cb, all) == 1);
  CHECK(encode_helper(0, cb, none) == 1);
  CHECK(encode_helper(0, cb, only_b) == 2);
  CHECK(encode_helper(1, cb, only_b) == 1);
}

TEST_CASE("source encoder and decoder") {
  Codebook cb;
  cb.bins = 2;
  cb.bin_of = {1, 2, 2};
  cb.u_words = {0, 1};
  CHECK(encode_source(0, cb) == 1);
  CHECK(encode_source(2, cb) == 2);

  const SupportSet all = full_support(3, 2);
  const DecodeResult single = decode(1, 1, cb, all);
  REQUIRE(single.symbol);
  CHECK(*single.symbol == 0);
  CHECK(single.candidates == 1);

  const DecodeResult two = decode(2, 1, cb, all);
  CHECK_FALSE(two.symbol);
  CHECK(two.candidates == 2);

  SupportSet partial = all;
  partial.member(1, 1) = false;
  const DecodeResult narrowed = decode(2, 2, cb, partial);
  REQUIRE(narrowed.symbol);
  CHECK(*narrowed.symbol == 2);

  SupportSet empty{BoolArray::Constant(3, 2, false)};
  const DecodeResult zero = decode(1, 1, cb, empty);
  CHECK_FALSE(zero.symbol);
  CHECK(zero.candidates == 0);

  CHECK_THROWS_AS(decode(3, 1, cb, all), UsageError);
  CHECK_THROWS_AS(decode(1, 3, cb, all), UsageError);
}

TEST_CASE("markov sampling matches the composed joint") {
  const JointPmf p_xy = dsbs(0.25);
  const Channel w = Channel::binary_symmetric(0.1);
  const JointPmf p_xyu = compose_markov(p_xy, w);
  PhiloxStream rng(2718, 0);
  const int samples = 100000;
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(8);
  for (int i = 0; i < samples; ++i) {
    const MarkovDraw d = sample_markov(p_xy, w, rng);
    counts[(d.x * 2 + d.y) * 2 + d.u] += 1.0;
  }
  double chi2 = 0.0;
  for (Index c = 0; c < 8; ++c) {
    const double expected = samples * p_xyu.mass()[c];
    chi2 += (counts[c] - expected) * (counts[c] - expected) / expected;
  }
  // 7 degrees of freedom, 0.999 quantile.
  CHECK(chi2 < 24.32);
}

TEST_CASE("simulation: trivially error-free configuration") {
  // X = Y, identity helper, every symbol in its own bin.
  Eigen::Matrix2d eq;
  eq << 0.5, 0.0, 0.0, 0.5;
  const JointPmf p = JointPmf::from_matrix(eq);
  const EpsilonBudget b{0.25, 0.125, 0.002};
  RatePair rates = achievable_pair(p, Channel::identity(2), b);
  SimConfig cfg;
  cfg.trials = 2000;
  cfg.seed = 5;
  const SimReport r = simulate(p, Channel::identity(2), b, rates, cfg);
  CHECK(r.trials == 2000);
  CHECK(r.errors_total <= r.e1_count + r.e2_count + r.e3_count);
  CHECK(r.unexplained_errors == 0);
  CHECK(r.empirical_error == static_cast<double>(r.errors_total) / 2000.0);
  CHECK(r.empirical_error <= 0.25);
}

TEST_CASE("simulation: error accounting and determinism") {
  const JointPmf p = dsbs(0.25);
  const Channel w = Channel::binary_symmetric(0.1);
  const EpsilonBudget b{0.25, 0.125, 0.002};
  const RatePair rates = achievable_pair(p, w, b);
  SimConfig cfg;
  cfg.trials = 3000;
  cfg.seed = 17;
  const SimReport a = simulate(p, w, b, rates, cfg);
  CHECK(a.unexplained_errors == 0);
  CHECK(a.e1_or_e2_count == a.e1_count + a.e2_count);
  CHECK(a.e2_count <= a.e2_raw_count);
  CHECK(a.smoothing_term == doctest::Approx(0.002 + 2.0 * std::sqrt(0.002)));
  CHECK(a.binning_term == doctest::Approx(std::exp2(-rates.r1_bits) * 2.0));

  cfg.threads = 3;
  const SimReport c = simulate(p, w, b, rates, cfg);
  CHECK(c.errors_total == a.errors_total);
  CHECK(c.e3_count == a.e3_count);

  cfg.threads = 1;
  cfg.mode = CodebookMode::Fixed;
  const SimReport f1 = simulate(p, w, b, rates, cfg);
  const SimReport f2 = simulate(p, w, b, rates, cfg);
  CHECK(f1.errors_total == f2.errors_total);
  CHECK(f1.unexplained_errors == 0);

  SimConfig zero;
  zero.trials = 0;
  CHECK_THROWS_AS(simulate(p, w, b, rates, zero), UsageError);
  CHECK_THROWS_AS(simulate(p, w, {0.2, 0.19, 0.01}, rates, cfg), ConstraintError);
}

TEST_CASE("trial events explain every decode failure") {
  PhiloxStream pick(31, 0);
  for (int inst = 0; inst < 20; ++inst) {
    const JointPmf p_xy({4, 3}, testing::random_mass(pick, 12, 0.2));
    Eigen::MatrixXd rows(3, 3);
    for (Index y = 0; y < 3; ++y) rows.row(y) = testing::random_mass(pick, 3, 0.3).transpose();
    const Channel w(rows);
    const double eps11 = 0.05 * pick.uniform();
    const CodeSetup setup = prepare_code(p_xy, w, eps11);
    PhiloxStream rng(inst, 1);
    for (int t = 0; t < 200; ++t) {
      const Codebook cb = draw_code(setup.p_u, 4, 2, 2, rng);
      const TrialOutcome o = run_trial(setup, cb, rng);
      if (o.error) CHECK((o.e1 || o.e2 || o.e3));
      // Without E2 and E3 the true x is the sole candidate.
      if (!o.e2 && !o.e3) CHECK_FALSE(o.error);
    }
  }
}
