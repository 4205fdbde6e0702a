#include "oneshot/prob.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "oneshot/error.hpp"

namespace oneshot {

namespace {

void validate_mass(const Eigen::VectorXd& mass, double tolerance, const char* what) {
  if (mass.size() == 0) throw UsageError(std::string(what) + ": empty mass vector");
  for (Index i = 0; i < mass.size(); ++i) {
    if (!std::isfinite(mass[i]) || mass[i] < 0.0) {
      throw UsageError(std::string(what) + ": entry " + std::to_string(i) +
                       " is negative or not finite");
    }
  }
  const double total = mass.sum();
  if (std::abs(total - 1.0) > tolerance) {
    throw UsageError(std::string(what) + ": mass sums to " + std::to_string(total) +
                     ", expected 1");
  }
}

Shape strides_of(const Shape& dims) {
  Shape s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

}  // namespace

std::size_t cell_count(const Shape& dims, std::size_t max_cells) {
  std::size_t cells = 1;
  for (Index d : dims) {
    if (d < 1) throw UsageError("alphabet size must be at least 1");
    const auto ud = static_cast<std::size_t>(d);
    if (cells > max_cells / ud) {
      throw ResourceError("product alphabet exceeds the cell cap of " +
                          std::to_string(max_cells));
    }
    cells *= ud;
  }
  if (cells > max_cells) {
    throw ResourceError("product alphabet needs " + std::to_string(cells) +
                        " cells, cap is " + std::to_string(max_cells));
  }
  return cells;
}

// ---------------------------------------------------------------------------

Pmf::Pmf(Eigen::VectorXd mass, double tolerance) : mass_(std::move(mass)) {
  validate_mass(mass_, tolerance, "pmf");
}

Pmf Pmf::uniform(Index size) {
  if (size < 1) throw UsageError("pmf: alphabet size must be at least 1");
  return Pmf(Eigen::VectorXd::Constant(size, 1.0 / static_cast<double>(size)));
}

Pmf Pmf::point(Index size, Index symbol) {
  if (symbol < 0 || symbol >= size) throw UsageError("pmf: point symbol out of range");
  Eigen::VectorXd m = Eigen::VectorXd::Zero(size);
  m[symbol] = 1.0;
  return Pmf(std::move(m));
}

JointPmf::JointPmf(Shape dims, Eigen::VectorXd mass, double tolerance)
    : dims_(std::move(dims)), mass_(std::move(mass)) {
  if (dims_.size() < 2 || dims_.size() > 3) {
    throw UsageError("joint pmf: expected 2 or 3 alphabets, got " +
                     std::to_string(dims_.size()));
  }
  const std::size_t cells = cell_count(dims_);
  if (static_cast<std::size_t>(mass_.size()) != cells) {
    throw UsageError("joint pmf: mass has " + std::to_string(mass_.size()) +
                     " entries, alphabets need " + std::to_string(cells));
  }
  validate_mass(mass_, tolerance, "joint pmf");
}

JointPmf JointPmf::from_matrix(const Eigen::MatrixXd& m, double tolerance) {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  Eigen::VectorXd flat = Eigen::Map<const Eigen::VectorXd>(rm.data(), rm.size());
  return JointPmf({m.rows(), m.cols()}, std::move(flat), tolerance);
}

Eigen::MatrixXd JointPmf::matrix() const {
  if (rank() != 2) throw UsageError("joint pmf: matrix view needs exactly 2 axes");
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      mass_.data(), dims_[0], dims_[1]);
}

Channel::Channel(Eigen::MatrixXd rows, double tolerance) : rows_(std::move(rows)) {
  if (rows_.rows() < 1 || rows_.cols() < 1) throw UsageError("channel: empty matrix");
  for (Index i = 0; i < rows_.rows(); ++i) {
    validate_mass(rows_.row(i).transpose(), tolerance,
                  ("channel row " + std::to_string(i)).c_str());
  }
}

Channel Channel::identity(Index size) {
  return Channel(Eigen::MatrixXd::Identity(size, size));
}

Channel Channel::constant(Index input_size) {
  return Channel(Eigen::MatrixXd::Ones(input_size, 1));
}

Channel Channel::binary_symmetric(double flip) {
  Eigen::Matrix2d w;
  w << 1.0 - flip, flip, flip, 1.0 - flip;
  return Channel(w);
}

// ---------------------------------------------------------------------------

Pmf marginal(const JointPmf& j, std::size_t axis) {
  if (axis >= j.rank()) throw UsageError("marginal: axis out of range");
  const Shape strides = strides_of(j.dims());
  const Index d = j.dim(axis);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  for (Index c = 0; c < j.mass().size(); ++c) out[(c / strides[axis]) % d] += j.mass()[c];
  return Pmf(std::move(out), kProductTolerance);
}

JointPmf marginalize(const JointPmf& j, std::span<const std::size_t> keep) {
  if (keep.empty() || keep.size() >= j.rank()) {
    throw UsageError("marginalize: keep must be a nonempty proper subset of the axes");
  }
  for (std::size_t a = 0; a < keep.size(); ++a) {
    if (keep[a] >= j.rank()) throw UsageError("marginalize: axis out of range");
    for (std::size_t b = 0; b < a; ++b) {
      if (keep[a] == keep[b]) throw UsageError("marginalize: repeated axis");
    }
  }
  if (keep.size() < 2) {
    throw UsageError("marginalize: a single kept axis yields a Pmf; use marginal()");
  }
  const Shape strides = strides_of(j.dims());
  Shape out_dims;
  for (std::size_t a : keep) out_dims.push_back(j.dim(a));
  const Shape out_strides = strides_of(out_dims);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Index>(cell_count(out_dims)));
  for (Index c = 0; c < j.mass().size(); ++c) {
    Index target = 0;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      target += ((c / strides[keep[k]]) % j.dim(keep[k])) * out_strides[k];
    }
    out[target] += j.mass()[c];
  }
  return JointPmf(std::move(out_dims), std::move(out), kProductTolerance);
}

ConditionalSlice condition(const JointPmf& j, std::size_t given_axis, Index symbol) {
  if (given_axis >= j.rank()) throw UsageError("condition: axis out of range");
  if (symbol < 0 || symbol >= j.dim(given_axis)) {
    throw UsageError("condition: symbol " + std::to_string(symbol) + " out of range");
  }
  const Shape strides = strides_of(j.dims());
  const Index slice_size = j.mass().size() / j.dim(given_axis);
  ConditionalSlice out{Eigen::VectorXd::Zero(slice_size), false};
  Index k = 0;
  for (Index c = 0; c < j.mass().size(); ++c) {
    if ((c / strides[given_axis]) % j.dim(given_axis) == symbol) out.mass[k++] = j.mass()[c];
  }
  const double total = out.mass.sum();
  if (total > 0.0) {
    out.mass /= total;
  } else {
    out.mass.setZero();
    out.degenerate = true;
  }
  return out;
}

JointPmf compose_markov(const JointPmf& p_xy, const Channel& helper) {
  if (p_xy.rank() != 2) throw UsageError("compose_markov: P_XY must have exactly 2 axes");
  if (helper.input_size() != p_xy.dim(1)) {
    throw UsageError("compose_markov: helper input alphabet (" +
                     std::to_string(helper.input_size()) + ") does not match Y (" +
                     std::to_string(p_xy.dim(1)) + ")");
  }
  const Index nx = p_xy.dim(0);
  const Index ny = p_xy.dim(1);
  const Index nu = helper.output_size();
  Eigen::VectorXd out(nx * ny * nu);
  for (Index x = 0; x < nx; ++x)
    for (Index y = 0; y < ny; ++y)
      for (Index u = 0; u < nu; ++u) out[(x * ny + y) * nu + u] = p_xy(x, y) * helper(y, u);
  return JointPmf({nx, ny, nu}, std::move(out), kProductTolerance);
}

JointPmf independent_joint(const Pmf& a, const Pmf& b) {
  return JointPmf::from_matrix(a.mass() * b.mass().transpose(), kProductTolerance);
}

Pmf product_extend(const Pmf& p, int n, std::size_t max_cells) {
  if (n < 1) throw UsageError("product_extend: n must be positive");
  cell_count(Shape(static_cast<std::size_t>(n), p.size()), max_cells);
  Eigen::VectorXd cur = p.mass();
  for (int k = 1; k < n; ++k) {
    Eigen::VectorXd next(cur.size() * p.size());
    for (Index a = 0; a < cur.size(); ++a) next.segment(a * p.size(), p.size()) = cur[a] * p.mass();
    cur = std::move(next);
  }
  return Pmf(std::move(cur), kProductTolerance);
}

JointPmf product_extend(const JointPmf& j, int n, std::size_t max_cells) {
  if (n < 1) throw UsageError("product_extend: n must be positive");
  Shape dims(j.rank(), 1);
  for (std::size_t a = 0; a < j.rank(); ++a) {
    for (int k = 0; k < n; ++k) {
      if (dims[a] > std::numeric_limits<Index>::max() / j.dim(a)) {
        throw ResourceError("product_extend: alphabet size overflow");
      }
      dims[a] *= j.dim(a);
    }
  }
  Shape all;
  for (int k = 0; k < n; ++k) all.insert(all.end(), j.dims().begin(), j.dims().end());
  cell_count(all, max_cells);

  // Each axis index of the extension is (index over the first n-1 copies) * d + (new symbol).
  const Shape base_strides = strides_of(j.dims());
  Shape cur_dims = j.dims();
  Eigen::VectorXd cur = j.mass();
  for (int k = 1; k < n; ++k) {
    Shape next_dims(j.rank());
    for (std::size_t a = 0; a < j.rank(); ++a) next_dims[a] = cur_dims[a] * j.dim(a);
    const Shape cur_strides = strides_of(cur_dims);
    const Shape next_strides = strides_of(next_dims);
    Eigen::VectorXd next = Eigen::VectorXd::Zero(cur.size() * j.mass().size());
    for (Index c = 0; c < cur.size(); ++c) {
      if (cur[c] == 0.0) continue;
      Index offset = 0;
      for (std::size_t a = 0; a < j.rank(); ++a) {
        offset += ((c / cur_strides[a]) % cur_dims[a]) * j.dim(a) * next_strides[a];
      }
      for (Index b = 0; b < j.mass().size(); ++b) {
        Index idx = offset;
        for (std::size_t a = 0; a < j.rank(); ++a) {
          idx += ((b / base_strides[a]) % j.dim(a)) * next_strides[a];
        }
        next[idx] = cur[c] * j.mass()[b];
      }
    }
    cur = std::move(next);
    cur_dims = std::move(next_dims);
  }
  return JointPmf(std::move(cur_dims), std::move(cur), kProductTolerance);
}

// ---------------------------------------------------------------------------

double entropy_bits(const Pmf& p) { return entropy_bits(p.mass()); }

double kl_divergence_bits(const Pmf& p, const Pmf& q) {
  if (p.size() != q.size()) throw UsageError("kl_divergence: alphabet mismatch");
  for (Index x = 0; x < p.size(); ++x) {
    if (p[x] > 0.0 && q[x] == 0.0) {
      throw DomainError("kl_divergence: P(" + std::to_string(x) + ") > 0 but Q(" +
                        std::to_string(x) + ") = 0");
    }
  }
  return kl_divergence_bits(p.mass(), q.mass());
}

double conditional_entropy_bits(const JointPmf& j, std::size_t target, std::size_t given) {
  const std::size_t pair[] = {target, given};
  const JointPmf tg = j.rank() == 2 && target == 0 && given == 1 ? j : marginalize(j, pair);
  return entropy_bits(tg.mass()) - entropy_bits(marginal(tg, 1));
}

double mutual_information_bits(const JointPmf& j, std::size_t a, std::size_t b) {
  const std::size_t pair[] = {a, b};
  const JointPmf ab = j.rank() == 2 && a == 0 && b == 1 ? j : marginalize(j, pair);
  return entropy_bits(marginal(ab, 0)) + entropy_bits(marginal(ab, 1)) - entropy_bits(ab.mass());
}

ShannonQuantities shannon_quantities(const JointPmf& j) {
  const std::size_t xy[] = {0, 1};
  const JointPmf pxy = j.rank() == 2 ? j : marginalize(j, xy);
  ShannonQuantities s;
  s.h_x = entropy_bits(marginal(pxy, 0));
  s.h_y = entropy_bits(marginal(pxy, 1));
  s.h_xy = entropy_bits(pxy.mass());
  s.h_x_given_y = s.h_xy - s.h_y;
  s.i_xy = s.h_x + s.h_y - s.h_xy;
  if (j.rank() == 3) {
    s.h_x_given_u = conditional_entropy_bits(j, 0, 2);
    s.i_uy = mutual_information_bits(j, 2, 1);
  }
  return s;
}

JointPmf dsbs(double crossover) {
  Eigen::Matrix2d m;
  m << 0.5 * (1.0 - crossover), 0.5 * crossover, 0.5 * crossover, 0.5 * (1.0 - crossover);
  return JointPmf::from_matrix(m);
}

}  // namespace oneshot
