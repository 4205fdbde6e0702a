#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace oneshot {

using Index = Eigen::Index;
using Shape = std::vector<Index>;

inline constexpr std::size_t kDefaultMaxCells = std::size_t{1} << 24;
inline constexpr double kInputTolerance = 1e-12;
inline constexpr double kProductTolerance = 1e-9;

/// Number of cells of a product alphabet; throws ResourceError above max_cells.
std::size_t cell_count(const Shape& dims, std::size_t max_cells = kDefaultMaxCells);

/// Probability mass function over the symbols 0..size-1.
class Pmf {
 public:
  explicit Pmf(Eigen::VectorXd mass, double tolerance = kInputTolerance);

  static Pmf uniform(Index size);
  static Pmf point(Index size, Index symbol);
  static Pmf bernoulli(double p1) { return Pmf(Eigen::Vector2d(1.0 - p1, p1)); }

  Index size() const { return mass_.size(); }
  const Eigen::VectorXd& mass() const { return mass_; }
  double operator[](Index x) const { return mass_[x]; }

  Index support_size() const { return (mass_.array() > 0.0).count(); }
  bool in_support(Index x) const { return mass_[x] > 0.0; }

 private:
  Eigen::VectorXd mass_;
};

/// Joint pmf over 2 or 3 alphabets, stored dense and row-major (last axis fastest).
class JointPmf {
 public:
  JointPmf(Shape dims, Eigen::VectorXd mass, double tolerance = kInputTolerance);

  // Rows index axis 0.
  static JointPmf from_matrix(const Eigen::MatrixXd& m, double tolerance = kInputTolerance);

  std::size_t rank() const { return dims_.size(); }
  const Shape& dims() const { return dims_; }
  Index dim(std::size_t axis) const { return dims_.at(axis); }
  const Eigen::VectorXd& mass() const { return mass_; }

  double operator()(Index a, Index b) const { return mass_[a * dims_[1] + b]; }
  double operator()(Index a, Index b, Index c) const {
    return mass_[(a * dims_[1] + b) * dims_[2] + c];
  }

  /// Rank-2 view as a matrix with axis 0 along rows.
  Eigen::MatrixXd matrix() const;

  /// The same mass as a Pmf over the flattened product alphabet.
  Pmf flatten() const { return Pmf(mass_, kProductTolerance); }

 private:
  Shape dims_;
  Eigen::VectorXd mass_;
};

/// Conditional pmf W(out | in); row i is the output distribution for input i.
class Channel {
 public:
  explicit Channel(Eigen::MatrixXd rows, double tolerance = kInputTolerance);

  static Channel identity(Index size);
  static Channel constant(Index input_size);
  static Channel binary_symmetric(double flip);

  Index input_size() const { return rows_.rows(); }
  Index output_size() const { return rows_.cols(); }
  const Eigen::MatrixXd& matrix() const { return rows_; }
  double operator()(Index in, Index out) const { return rows_(in, out); }

  bool operator==(const Channel& other) const { return rows_ == other.rows_; }

 private:
  Eigen::MatrixXd rows_;
};

/// Sub-normalized function dominated by a reference pmf: the smoothing objects.
struct SubPmf {
  Shape dims;
  Eigen::VectorXd mass;
  Eigen::VectorXd reference;

  double total() const { return mass.sum(); }
  bool dominated() const {
    return (mass.array() >= 0.0).all() && (mass.array() <= reference.array()).all();
  }
  bool same_support() const {
    return ((mass.array() > 0.0) == (reference.array() > 0.0)).all();
  }
};

/// Distribution of the remaining axes given one axis takes a value.
struct ConditionalSlice {
  Eigen::VectorXd mass;  // flattened over the remaining axes, row-major
  bool degenerate = false;  // marginal of the given symbol was 0; mass is all zero
};

// Marginal of a single axis.
Pmf marginal(const JointPmf& j, std::size_t axis);

// Marginal over a subset of at least two axes, in the order given by `keep`.
// `keep` must be a nonempty proper subset; single axes go through marginal().
JointPmf marginalize(const JointPmf& j, std::span<const std::size_t> keep);

ConditionalSlice condition(const JointPmf& j, std::size_t given_axis, Index symbol);

/// P_XYU(x,y,u) = P_XY(x,y) W(u|y).
JointPmf compose_markov(const JointPmf& p_xy, const Channel& helper);

/// Outer product of two pmfs as a rank-2 joint.
JointPmf independent_joint(const Pmf& a, const Pmf& b);

Pmf product_extend(const Pmf& p, int n, std::size_t max_cells = kDefaultMaxCells);
JointPmf product_extend(const JointPmf& j, int n, std::size_t max_cells = kDefaultMaxCells);

// Shannon quantities, in bits. Zero-mass terms contribute nothing.

template <typename Derived>
double entropy_bits(const Eigen::DenseBase<Derived>& p) {
  double h = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    const double v = p.derived().coeff(i);
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

template <typename DerivedP, typename DerivedQ>
double kl_divergence_bits(const Eigen::DenseBase<DerivedP>& p, const Eigen::DenseBase<DerivedQ>& q) {
  double d = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    const double v = p.derived().coeff(i);
    if (v > 0.0) d += v * std::log2(v / q.derived().coeff(i));
  }
  return d;
}

double entropy_bits(const Pmf& p);
double kl_divergence_bits(const Pmf& p, const Pmf& q);
double conditional_entropy_bits(const JointPmf& j, std::size_t target, std::size_t given);
double mutual_information_bits(const JointPmf& j, std::size_t a, std::size_t b);

struct ShannonQuantities {
  double h_x = 0.0;
  double h_y = 0.0;
  double h_xy = 0.0;
  double h_x_given_y = 0.0;
  double i_xy = 0.0;
  // Only for X x Y x U joints.
  std::optional<double> h_x_given_u;
  std::optional<double> i_uy;
};

ShannonQuantities shannon_quantities(const JointPmf& j);

/// Binary entropy function in bits.
inline double binary_entropy_bits(double p) {
  return entropy_bits(Eigen::Vector2d(p, 1.0 - p));
}

/// Doubly symmetric binary source: uniform X, Y = X xor Bernoulli(crossover).
JointPmf dsbs(double crossover);

}  // namespace oneshot
