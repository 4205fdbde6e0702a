#include "oneshot/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "oneshot/asymptotics.hpp"
#include "oneshot/coding.hpp"
#include "oneshot/error.hpp"
#include "oneshot/io.hpp"
#include "oneshot/region.hpp"
#include "oneshot/smooth.hpp"

namespace oneshot {

namespace {

// Writes to `path` when given, otherwise to the command's stdout.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text(path, text);
  }
}

EpsilonBudget parse_budget(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--budget", "expected eps,eps1,eps11 but got '" + text + "'");
    }
  }
  if (v.size() != 3) throw CLI::ValidationError("--budget", "expected eps,eps1,eps11 but got '" + text + "'");
  return {v[0], v[1], v[2]};
}

JointPmf load_xu_joint(const std::string& path) {
  const MassTable t = read_table(path);
  if (t.alphabets.size() == 1) return JointPmf({t.alphabets[0], 1}, t.mass);
  return to_joint(t);
}

struct Options {
  unsigned threads = 1;

  std::string joint, helper, p, q, out;
  double eps = 0.0, eps1 = 0.0, eps11 = 0.0;
  std::string method;
  int oracle_grid = 10000;
  int simplex_grid = 11;

  Index u_size = 0;
  std::vector<std::string> budgets;

  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  std::uint64_t stream_base = 0;
  std::string mode = "resample";
  std::optional<double> r1, r2;

  std::string kind;
  int n_max = 8;
  bool brute = false;
};

int cmd_entropy(const Options& o, std::ostream& out) {
  const JointPmf p_xu = load_xu_joint(o.joint);
  if (o.method == "oracle") {
    out << format_number(smooth_h0_oracle(p_xu, o.eps)) << '\n';
    return kExitOk;
  }
  const SmoothEntropyResult r = smooth_conditional_h0(p_xu, o.eps);
  out << format_number(r.value_bits) << '\n';
  if (!o.out.empty()) write_text(o.out, smoothing_json(r.smoothing, r.value_bits, o.eps));
  return kExitOk;
}

int cmd_divergence(const Options& o, std::ostream& out) {
  const MassTable pt = read_table(o.p);
  const MassTable qt = read_table(o.q);
  if (pt.alphabets != qt.alphabets) throw UsageError("--p and --q have different alphabets");
  const Pmf p = to_pmf(pt);
  const Pmf q = to_pmf(qt);
  if (o.method == "oracle") {
    out << format_number(smooth_divergence_oracle(p, q, o.eps, o.oracle_grid)) << '\n';
    return kExitOk;
  }
  SmoothDivergenceResult r = o.method == "procedure" ? smooth_divergence_procedure(p, q, o.eps)
                                                     : smooth_max_divergence(p, q, o.eps);
  r.smoothing.dims = pt.alphabets;
  out << format_number(r.value_bits) << '\n';
  if (!o.out.empty()) write_text(o.out, smoothing_json(r.smoothing, r.value_bits, o.eps));
  return kExitOk;
}

int cmd_region(const Options& o, std::ostream& out) {
  const JointPmf p_xy = to_joint(read_table(o.joint));
  const Channel helper = to_channel(read_table(o.helper));
  const RatePair rates = achievable_pair(p_xy, helper, {o.eps, o.eps1, o.eps11});
  const WynerPoint w = wyner_point(p_xy, helper);
  emit(o.out, rate_pair_json(rates, &w), out);
  return kExitOk;
}

int cmd_frontier(const Options& o, std::ostream& out) {
  const JointPmf p_xy = to_joint(read_table(o.joint));
  std::vector<EpsilonBudget> budgets;
  for (const auto& b : o.budgets) budgets.push_back(parse_budget(b));
  if (budgets.empty()) {
    if (!(o.eps > 0.0 && o.eps < 1.0)) throw UsageError("--eps must lie in (0, 1) when --budget is absent");
    budgets = default_budget_grid(o.eps);
  }
  const Index u_size = o.u_size > 0 ? o.u_size : p_xy.dim(1) + 1;
  const auto frontier = frontier_search(p_xy, u_size, o.simplex_grid, budgets, {o.threads});
  std::ostringstream csv;
  write_frontier_csv(csv, frontier);
  emit(o.out, csv.str(), out);
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const JointPmf p_xy = to_joint(read_table(o.joint));
  const Channel helper = to_channel(read_table(o.helper));
  const EpsilonBudget budget{o.eps, o.eps1, o.eps11};
  RatePair rates = achievable_pair(p_xy, helper, budget);
  if (o.r1) rates.r1_bits = *o.r1;
  if (o.r2) rates.r2_bits = *o.r2;

  SimConfig config;
  config.trials = o.trials;
  config.seed = o.seed;
  config.stream_base = o.stream_base;
  config.mode = o.mode == "fixed" ? CodebookMode::Fixed : CodebookMode::Resample;
  config.threads = o.threads;
  emit(o.out, sim_report_json(simulate(p_xy, helper, budget, rates, config)), out);
  return kExitOk;
}

int cmd_converge(const Options& o, std::ostream& out) {
  ConvergenceSeries s;
  if (o.kind == "divergence") {
    if (o.p.empty() || o.q.empty()) throw UsageError("converge --kind divergence needs --p and --q");
    s = divergence_series(to_pmf(read_table(o.p)), to_pmf(read_table(o.q)), o.eps, o.n_max,
                          {!o.brute, kDefaultMaxCells});
  } else {
    if (o.joint.empty()) throw UsageError("converge --kind entropy needs --joint");
    s = entropy_series(to_joint(read_table(o.joint)), o.eps, o.n_max);
  }
  std::ostringstream csv;
  write_series_csv(csv, s);
  emit(o.out, csv.str(), out);
  return kExitOk;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"One-shot smooth Renyi quantities and helper rate regions"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--threads", o.threads, "Cap on internal parallelism")->check(CLI::Range(1u, 1024u));

  std::function<int(const Options&, std::ostream&)> action;

  auto* entropy = app.add_subcommand("entropy", "Conditional smooth zero-order entropy H0^eps(X|U)");
  entropy->add_option("--joint", o.joint, "Joint over X x U (or a single pmf)")->required();
  entropy->add_option("--eps", o.eps, "Smoothing budget in [0, 1)");
  entropy->add_option("--method", o.method, "exact or oracle")
      ->check(CLI::IsMember({"exact", "oracle"}))
      ->default_val("exact");
  entropy->add_option("--out", o.out, "Write the optimal smoothing Q as JSON");
  entropy->callback([&] { action = cmd_entropy; });

  auto* divergence = app.add_subcommand("divergence", "Smooth max divergence D^eps_inf(P||Q)");
  divergence->add_option("--p", o.p, "P as a JSON table")->required();
  divergence->add_option("--q", o.q, "Q as a JSON table")->required();
  divergence->add_option("--eps", o.eps, "Smoothing budget in [0, 1)");
  divergence->add_option("--method", o.method, "threshold, procedure or oracle")
      ->check(CLI::IsMember({"threshold", "procedure", "oracle"}))
      ->default_val("threshold");
  divergence->add_option("--grid", o.oracle_grid, "Oracle ladder steps per coordinate")->default_val(10000);
  divergence->add_option("--out", o.out, "Write the optimal smoothing phi as JSON");
  divergence->callback([&] { action = cmd_divergence; });

  auto* region = app.add_subcommand("region", "Achievable one-shot rate pair for one helper channel");
  region->add_option("--joint", o.joint, "P_XY as a JSON table")->required();
  region->add_option("--helper", o.helper, "P_{U|Y} as a JSON table [|Y|, |U|]")->required();
  region->add_option("--eps", o.eps)->required();
  region->add_option("--eps1", o.eps1)->required();
  region->add_option("--eps11", o.eps11)->required();
  region->add_option("--out", o.out, "Write JSON here instead of stdout");
  region->callback([&] { action = cmd_region; });

  auto* frontier = app.add_subcommand("frontier", "Pareto frontier over simplex-grid helper channels");
  frontier->add_option("--joint", o.joint, "P_XY as a JSON table")->required();
  frontier->add_option("--u-size", o.u_size, "Helper alphabet size (default |Y|+1)");
  frontier->add_option("--grid", o.simplex_grid, "Simplex grid points per edge")->default_val(11);
  frontier->add_option("--eps", o.eps, "Total error; selects the default budget grid");
  frontier->add_option("--budget", o.budgets, "eps,eps1,eps11 (repeatable)");
  frontier->add_option("--out", o.out, "Write CSV here instead of stdout");
  frontier->callback([&] { action = cmd_frontier; });

  auto* sim = app.add_subcommand("simulate", "Monte-Carlo error of the random binning/covering code");
  sim->add_option("--joint", o.joint, "P_XY as a JSON table")->required();
  sim->add_option("--helper", o.helper, "P_{U|Y} as a JSON table [|Y|, |U|]")->required();
  sim->add_option("--eps", o.eps)->required();
  sim->add_option("--eps1", o.eps1)->required();
  sim->add_option("--eps11", o.eps11)->required();
  sim->add_option("--trials", o.trials)->default_val(10000);
  sim->add_option("--seed", o.seed, "64-bit unsigned seed")->default_val(0);
  sim->add_option("--stream-base", o.stream_base)->default_val(0);
  sim->add_option("--mode", o.mode, "resample or fixed codebook")
      ->check(CLI::IsMember({"resample", "fixed"}));
  sim->add_option("--r1", o.r1, "Override the source rate in bits");
  sim->add_option("--r2", o.r2, "Override the helper rate in bits");
  sim->add_option("--out", o.out, "Write the JSON report here instead of stdout");
  sim->callback([&] { action = cmd_simulate; });

  auto* conv = app.add_subcommand("converge", "Per-symbol convergence series on i.i.d. extensions");
  conv->add_option("--kind", o.kind, "divergence or entropy")
      ->required()
      ->check(CLI::IsMember({"divergence", "entropy"}));
  conv->add_option("--p", o.p);
  conv->add_option("--q", o.q);
  conv->add_option("--joint", o.joint);
  conv->add_option("--eps", o.eps);
  conv->add_option("--n-max", o.n_max)->default_val(8);
  conv->add_option("--brute", o.brute, "Materialize X^n instead of aggregating by type");
  conv->add_option("--out", o.out, "Write CSV here instead of stdout");
  conv->callback([&] { action = cmd_converge; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << one_line(e.what()) << '\n';
    return kExitIo;
  }

  try {
    return action(o, out);
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << one_line(e.what()) << '\n';
    return kExitIo;
  } catch (const IoError& e) {
    err << "error: io: " << one_line(e.what()) << '\n';
    return kExitIo;
  } catch (const ConstraintError& e) {
    err << "error: constraint: " << e.what();
    for (const auto& d : e.diagnostics()) err << "; " << one_line(d);
    err << '\n';
    return kExitConstraint;
  } catch (const DomainError& e) {
    err << "error: domain: " << one_line(e.what()) << '\n';
    return kExitConstraint;
  } catch (const ResourceError& e) {
    err << "error: resource: " << one_line(e.what()) << '\n';
    return kExitConstraint;
  } catch (const UsageError& e) {
    err << "error: usage: " << one_line(e.what()) << '\n';
    return kExitConstraint;
  }
}

}  // namespace oneshot
