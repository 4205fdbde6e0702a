#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "oneshot/asymptotics.hpp"
#include "oneshot/coding.hpp"
#include "oneshot/prob.hpp"
#include "oneshot/region.hpp"
#include "oneshot/smooth.hpp"

namespace oneshot {

/// {"alphabets": [sizes...], "mass": [row-major flat array]}
struct MassTable {
  Shape alphabets;
  Eigen::VectorXd mass;
};

MassTable parse_table(std::string_view text, const std::string& origin = "<input>");
MassTable read_table(const std::filesystem::path& path);
std::string table_json(const Shape& alphabets, const Eigen::VectorXd& mass);

// Any table read as a Pmf over its (flattened) product alphabet.
Pmf to_pmf(const MassTable& t);
JointPmf to_joint(const MassTable& t);
// Two alphabets [|Y|, |U|]; row y is P_{U|Y}(.|y).
Channel to_channel(const MassTable& t);

/// Decimal with 12 significant digits.
std::string format_number(double v);

void write_frontier_csv(std::ostream& out, const std::vector<FrontierPoint>& frontier);
void write_series_csv(std::ostream& out, const ConvergenceSeries& series);

std::string rate_pair_json(const RatePair& rates, const WynerPoint* wyner = nullptr);
std::string sim_report_json(const SimReport& report);
std::string smoothing_json(const SubPmf& smoothing, double value_bits, double eps);

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace oneshot
