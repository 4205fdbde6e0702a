#include "oneshot/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "oneshot/error.hpp"

namespace oneshot {

namespace {

using ordered_json = nlohmann::ordered_json;

// A double that prints with at most 12 significant digits.
double rounded(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_number(v).c_str(), nullptr);
}

ordered_json budget_json(const EpsilonBudget& b) {
  return {{"eps", rounded(b.eps)}, {"eps1", rounded(b.eps1)}, {"eps11", rounded(b.eps11)}};
}

ordered_json channel_json(const Channel& w) {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = w.matrix();
  ordered_json mass = ordered_json::array();
  for (Index i = 0; i < rm.size(); ++i) mass.push_back(rounded(rm.data()[i]));
  return {{"alphabets", {w.input_size(), w.output_size()}}, {"mass", std::move(mass)}};
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

MassTable parse_table(std::string_view text, const std::string& origin) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(origin + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("alphabets") || !doc.contains("mass")) {
    throw IoError(origin + ": expected an object with \"alphabets\" and \"mass\"");
  }
  const auto& alph = doc["alphabets"];
  const auto& mass = doc["mass"];
  if (!alph.is_array() || alph.empty() || !mass.is_array()) {
    throw IoError(origin + ": \"alphabets\" and \"mass\" must be nonempty arrays");
  }
  MassTable t;
  for (const auto& a : alph) {
    if (!a.is_number_integer() || a.get<long long>() < 1) {
      throw IoError(origin + ": alphabet sizes must be positive integers");
    }
    t.alphabets.push_back(a.get<Index>());
  }
  std::size_t cells = 0;
  try {
    cells = cell_count(t.alphabets);
  } catch (const std::exception& e) {
    throw IoError(origin + ": " + e.what());
  }
  if (mass.size() != cells) {
    throw IoError(origin + ": \"mass\" has " + std::to_string(mass.size()) +
                  " entries, alphabets need " + std::to_string(cells));
  }
  t.mass.resize(static_cast<Index>(cells));
  for (std::size_t i = 0; i < cells; ++i) {
    if (!mass[i].is_number()) throw IoError(origin + ": mass entry " + std::to_string(i) + " is not a number");
    t.mass[static_cast<Index>(i)] = mass[i].get<double>();
  }
  return t;
}

MassTable read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_table(buf.str(), path.string());
}

std::string table_json(const Shape& alphabets, const Eigen::VectorXd& mass) {
  ordered_json doc;
  doc["alphabets"] = alphabets;
  ordered_json m = ordered_json::array();
  for (Index i = 0; i < mass.size(); ++i) m.push_back(rounded(mass[i]));
  doc["mass"] = std::move(m);
  return doc.dump() + "\n";
}

Pmf to_pmf(const MassTable& t) { return Pmf(t.mass); }

JointPmf to_joint(const MassTable& t) { return JointPmf(t.alphabets, t.mass); }

Channel to_channel(const MassTable& t) {
  if (t.alphabets.size() != 2) throw UsageError("channel file must have exactly two alphabets [|Y|, |U|]");
  Eigen::MatrixXd rows(t.alphabets[0], t.alphabets[1]);
  for (Index y = 0; y < rows.rows(); ++y)
    for (Index u = 0; u < rows.cols(); ++u) rows(y, u) = t.mass[y * rows.cols() + u];
  return Channel(std::move(rows));
}

void write_frontier_csv(std::ostream& out, const std::vector<FrontierPoint>& frontier) {
  out << "r1_bits,r2_bits,eps,eps1,eps11";
  if (!frontier.empty()) {
    const Channel& w = frontier.front().helper();
    for (Index y = 0; y < w.input_size(); ++y)
      for (Index u = 0; u < w.output_size(); ++u) out << ",helper_" << y << '_' << u;
  }
  out << '\n';
  for (const FrontierPoint& p : frontier) {
    const EpsilonBudget& b = p.budget();
    out << format_number(p.rates.r1_bits) << ',' << format_number(p.rates.r2_bits) << ','
        << format_number(b.eps) << ',' << format_number(b.eps1) << ',' << format_number(b.eps11);
    const Channel& w = p.helper();
    for (Index y = 0; y < w.input_size(); ++y)
      for (Index u = 0; u < w.output_size(); ++u) out << ',' << format_number(w(y, u));
    out << '\n';
  }
}

void write_series_csv(std::ostream& out, const ConvergenceSeries& series) {
  out << "n,value_bits,target_bits,eps\n";
  for (const SeriesEntry& e : series.entries) {
    out << e.n << ',' << format_number(e.value_bits) << ',' << format_number(series.target_bits)
        << ',' << format_number(series.eps) << '\n';
  }
}

std::string rate_pair_json(const RatePair& rates, const WynerPoint* wyner) {
  ordered_json doc;
  doc["r1_bits"] = rounded(rates.r1_bits);
  doc["r2_bits"] = rounded(rates.r2_bits);
  doc["h0_bits"] = rounded(rates.witness.h0_bits);
  doc["max_support"] = rates.witness.max_support;
  doc["divergence_bits"] = rounded(rates.witness.divergence_bits);
  doc["budget"] = budget_json(rates.witness.budget);
  doc["helper"] = channel_json(rates.witness.helper);
  if (wyner) {
    doc["wyner"] = {{"h_x_given_u_bits", rounded(wyner->h_x_given_u)},
                    {"i_u_y_bits", rounded(wyner->i_u_y)}};
  }
  return doc.dump(2) + "\n";
}

std::string sim_report_json(const SimReport& r) {
  ordered_json config;
  config["prng"] = std::string(Philox4x32::name);
  config["stream_rule"] = std::string(kStreamRule);
  config["seed"] = r.config.seed;
  config["stream_base"] = r.config.stream_base;
  config["trials"] = r.config.trials;
  config["codebook_mode"] = r.config.mode == CodebookMode::Resample ? "resample" : "fixed";
  config["budget"] = budget_json(r.budget);
  config["r1_bits"] = rounded(r.r1_bits);
  config["r2_bits"] = rounded(r.r2_bits);
  config["h0_bits"] = rounded(r.h0_bits);
  config["divergence_bits"] = rounded(r.divergence_bits);
  config["bins"] = r.bins;
  config["codewords"] = r.codewords;

  ordered_json report;
  report["trials"] = r.trials;
  report["errors_total"] = r.errors_total;
  report["e1_count"] = r.e1_count;
  report["e2_count"] = r.e2_count;
  report["e2_raw_count"] = r.e2_raw_count;
  report["e3_count"] = r.e3_count;
  report["e1_or_e2_count"] = r.e1_or_e2_count;
  report["unexplained_errors"] = r.unexplained_errors;
  report["benign_events"] = r.benign_events;
  report["empirical_error"] = rounded(r.empirical_error);
  report["bound_eps"] = rounded(r.bound_eps);
  report["smoothing_term"] = rounded(r.smoothing_term);
  report["exp_term"] = rounded(r.exp_term);
  report["binning_term"] = rounded(r.binning_term);
  report["exceeds_eps"] = r.exceeds_eps;

  ordered_json doc;
  doc["config"] = std::move(config);
  doc["report"] = std::move(report);
  return doc.dump(2) + "\n";
}

std::string smoothing_json(const SubPmf& smoothing, double value_bits, double eps) {
  ordered_json doc;
  doc["value_bits"] = rounded(value_bits);
  doc["eps"] = rounded(eps);
  doc["alphabets"] = smoothing.dims;
  ordered_json m = ordered_json::array();
  for (Index i = 0; i < smoothing.mass.size(); ++i) m.push_back(rounded(smoothing.mass[i]));
  doc["mass"] = std::move(m);
  return doc.dump() + "\n";
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace oneshot
