#include "posop/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "posop/errors.hpp"

namespace posop {

namespace {

void check_exponent(double p) {
  if (!(p >= 1.0)) throw InvalidArgument("norm exponent p must be >= 1");
}

void check_coordinates(const std::vector<double>& coords, std::size_t dim) {
  if (coords.empty()) return;
  if (coords.size() != dim) {
    throw DimensionMismatch("coordinate count does not match dimension");
  }
  for (std::size_t i = 1; i < coords.size(); ++i) {
    if (!(coords[i] > coords[i - 1])) {
      throw InvalidArgument("grid coordinates must be strictly increasing");
    }
  }
}

}  // namespace

SpaceSemantics::SpaceSemantics(SpaceKind kind, double p, RealVector weights,
                               std::vector<double> coordinates)
    : kind_(kind), p_(p), weights_(std::move(weights)),
      coordinates_(std::move(coordinates)) {
  if (weights_.size() == 0) throw InvalidArgument("space dimension must be positive");
  check_exponent(p_);
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw InvalidArgument("quadrature weights must be finite and > 0");
    }
  }
  check_coordinates(coordinates_, dim());
}

SpaceSemantics SpaceSemantics::lp_grid(RealVector weights, double p,
                                       std::vector<double> coordinates) {
  return SpaceSemantics(SpaceKind::LpGrid, p, std::move(weights),
                        std::move(coordinates));
}

SpaceSemantics SpaceSemantics::lp_midpoint(std::size_t m, double a, double b,
                                           double p) {
  if (m == 0) throw InvalidArgument("grid size must be positive");
  if (!(b > a)) throw InvalidArgument("interval must satisfy a < b");
  const double h = (b - a) / static_cast<double>(m);
  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = a + (static_cast<double>(i) + 0.5) * h;
  return lp_grid(RealVector::Constant(static_cast<Eigen::Index>(m), h), p,
                 std::move(x));
}

SpaceSemantics SpaceSemantics::ck_grid(std::vector<double> coordinates) {
  const auto n = static_cast<Eigen::Index>(coordinates.size());
  return SpaceSemantics(SpaceKind::CKGrid, std::numeric_limits<double>::infinity(),
                        RealVector::Ones(n), std::move(coordinates));
}

SpaceSemantics SpaceSemantics::ck_uniform(std::size_t m, double a, double b) {
  if (m < 2) throw InvalidArgument("a closed grid needs at least 2 points");
  if (!(b > a)) throw InvalidArgument("interval must satisfy a < b");
  std::vector<double> x(m);
  const double h = (b - a) / static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i) x[i] = a + static_cast<double>(i) * h;
  x.back() = b;
  return ck_grid(std::move(x));
}

SpaceSemantics SpaceSemantics::sequence(std::size_t dim, double p) {
  return SpaceSemantics(SpaceKind::Sequence, p,
                        RealVector::Ones(static_cast<Eigen::Index>(dim)), {});
}

bool operator==(const SpaceSemantics& a, const SpaceSemantics& b) {
  return a.kind_ == b.kind_ && a.p_ == b.p_ && a.weights_.size() == b.weights_.size() &&
         a.weights_ == b.weights_ && a.coordinates_ == b.coordinates_;
}

const char* to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::LpGrid: return "lp";
    case SpaceKind::CKGrid: return "ck";
    case SpaceKind::Sequence: return "seq";
  }
  return "?";
}

Operator::Operator(Matrix matrix, SpaceSemantics space, std::string label)
    : matrix_(std::move(matrix)), space_(std::move(space)), label_(std::move(label)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw InvalidArgument("operator matrix must be square, got " +
                          std::to_string(matrix_.rows()) + "x" +
                          std::to_string(matrix_.cols()));
  }
  if (static_cast<std::size_t>(matrix_.rows()) != space_.dim()) {
    throw DimensionMismatch("matrix dimension " + std::to_string(matrix_.rows()) +
                            " does not match space dimension " +
                            std::to_string(space_.dim()));
  }
  for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
    for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
      const double v = matrix_(i, j);
      if (!std::isfinite(v)) throw InvalidArgument("operator matrix has non-finite entries");
      if (v < 0.0) {
        throw NegativeEntry(static_cast<std::size_t>(i), static_cast<std::size_t>(j), v);
      }
    }
  }
}

Operator Operator::with_matrix(Matrix m, std::string label) const {
  return Operator(std::move(m), space_, std::move(label));
}

double pair(const Functional& alpha, const RealVector& f,
            const SpaceSemantics& space) {
  if (alpha.coefficients.size() != f.size() ||
      static_cast<std::size_t>(f.size()) != space.dim()) {
    throw DimensionMismatch("functional, vector and space dimensions differ");
  }
  if (space.kind() == SpaceKind::LpGrid) {
    return alpha.coefficients.cwiseProduct(space.weights()).dot(f);
  }
  return alpha.coefficients.dot(f);
}

Operator from_dense(Matrix rows, SpaceSemantics space, std::string label) {
  if (rows.rows() != rows.cols()) {
    throw InvalidArgument("matrix must be square, got " + std::to_string(rows.rows()) +
                          "x" + std::to_string(rows.cols()));
  }
  if (!rows.allFinite()) throw InvalidArgument("matrix has non-finite entries");
  const double scale = rows.size() ? std::max(1.0, rows.cwiseAbs().maxCoeff()) : 1.0;
  const double tau = kDefaultSupportTol * scale;
  for (Eigen::Index j = 0; j < rows.cols(); ++j) {
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      double& v = rows(i, j);
      if (v < 0.0) {
        if (v > -tau) {
          v = 0.0;
        } else {
          throw NegativeEntry(static_cast<std::size_t>(i), static_cast<std::size_t>(j), v);
        }
      }
    }
  }
  return Operator(std::move(rows), std::move(space), std::move(label));
}

Operator kernel_on_grid(const std::function<double(double, double)>& kernel,
                        std::size_t m, double a, double b, double p) {
  if (m < 2) throw InvalidArgument("kernel grid needs m >= 2");
  SpaceSemantics space = SpaceSemantics::lp_midpoint(m, a, b, p);
  const auto& x = space.coordinates();
  const auto n = static_cast<Eigen::Index>(m);
  Matrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = kernel(x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)]);
      if (!(v >= 0.0)) {
        throw NegativeEntry(static_cast<std::size_t>(i), static_cast<std::size_t>(j), v);
      }
      k(i, j) = space.weights()[j] * v;
    }
  }
  return Operator(std::move(k), std::move(space), "kernel");
}

Operator finite_rank(const std::vector<RealVector>& e_list,
                     const std::vector<Functional>& alpha_list,
                     const SpaceSemantics& space, std::string label) {
  if (e_list.size() != alpha_list.size()) {
    throw DimensionMismatch("finite_rank needs as many vectors as functionals");
  }
  if (e_list.empty()) throw InvalidArgument("finite_rank needs at least one term");
  const auto n = static_cast<Eigen::Index>(space.dim());
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < e_list.size(); ++j) {
    const RealVector& e = e_list[j];
    const RealVector& a = alpha_list[j].coefficients;
    if (e.size() != n || a.size() != n) {
      throw DimensionMismatch("term " + std::to_string(j) + " has the wrong dimension");
    }
    if ((e.array() < 0.0).any() || (a.array() < 0.0).any()) {
      throw InvalidArgument("finite_rank terms must be non-negative");
    }
    const RealVector row = space.kind() == SpaceKind::LpGrid
                               ? RealVector(a.cwiseProduct(space.weights()))
                               : a;
    m.noalias() += e * row.transpose();
  }
  return Operator(std::move(m), space, std::move(label));
}

std::vector<std::size_t> cyclic_pairing(std::size_t blocks) {
  std::vector<std::size_t> pairing(blocks);
  for (std::size_t n = 0; n < blocks; ++n) pairing[n] = (n + 1) % blocks;
  return pairing;
}

Operator partition_operator(std::size_t blocks, std::size_t block_size,
                            const std::vector<std::size_t>& pairing,
                            double overlap) {
  if (blocks < 2) throw InvalidArgument("partition operator needs N >= 2 blocks");
  if (block_size < 1) throw InvalidArgument("block_size must be >= 1");
  if (!(overlap >= 0.0 && overlap <= 1.0)) {
    throw InvalidArgument("overlap must lie in [0, 1]");
  }
  if (pairing.size() != blocks) throw InvalidArgument("pairing must have N entries");
  {
    std::vector<bool> seen(blocks, false);
    for (std::size_t target : pairing) {
      if (target >= blocks || seen[target]) {
        throw InvalidArgument("pairing is not a permutation of the blocks");
      }
      seen[target] = true;
    }
  }

  const bool split = overlap > 0.0 && overlap < 1.0;
  if (split && block_size < 2) {
    throw InvalidArgument("a fractional overlap needs block_size >= 2");
  }
  // Cells [0, head) of each block form its first `overlap` of length.
  std::size_t head = 0;
  if (overlap >= 1.0) {
    head = block_size;
  } else if (split) {
    const auto rounded = static_cast<std::size_t>(
        std::lround(overlap * static_cast<double>(block_size)));
    head = std::clamp<std::size_t>(rounded, 1, block_size - 1);
  }

  const std::size_t dim = blocks * block_size;
  RealVector weights(static_cast<Eigen::Index>(dim));
  std::vector<double> coords(dim);
  for (std::size_t n = 0; n < blocks; ++n) {
    double left = static_cast<double>(n);
    for (std::size_t t = 0; t < block_size; ++t) {
      double w;
      if (!split) {
        w = 1.0 / static_cast<double>(block_size);
      } else if (t < head) {
        w = overlap / static_cast<double>(head);
      } else {
        w = (1.0 - overlap) / static_cast<double>(block_size - head);
      }
      const std::size_t c = n * block_size + t;
      weights[static_cast<Eigen::Index>(c)] = w;
      coords[c] = left + 0.5 * w;
      left += w;
    }
  }

  // owner[c] = n such that cell c lies in J_n.
  std::vector<std::size_t> inverse(blocks);
  for (std::size_t n = 0; n < blocks; ++n) inverse[pairing[n]] = n;
  std::vector<std::size_t> owner(dim);
  for (std::size_t m = 0; m < blocks; ++m) {
    for (std::size_t t = 0; t < block_size; ++t) {
      owner[m * block_size + t] = t < head ? m : inverse[m];
    }
  }

  const auto n_dim = static_cast<Eigen::Index>(dim);
  Matrix t_mat = Matrix::Zero(n_dim, n_dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const std::size_t source_block = j / block_size;
    for (std::size_t i = 0; i < dim; ++i) {
      if (owner[i] == source_block) {
        t_mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            weights[static_cast<Eigen::Index>(j)];
      }
    }
  }
  return Operator(std::move(t_mat),
                  SpaceSemantics::lp_grid(std::move(weights), 2.0, std::move(coords)),
                  "partition");
}

RealVector partition_block_indicator(std::size_t blocks, std::size_t block_size,
                                     std::size_t n) {
  if (n >= blocks) throw InvalidArgument("block index out of range");
  RealVector v = RealVector::Zero(static_cast<Eigen::Index>(blocks * block_size));
  v.segment(static_cast<Eigen::Index>(n * block_size),
            static_cast<Eigen::Index>(block_size))
      .setOnes();
  return v;
}

ComplexVector apply(const Operator& t, const ComplexVector& f) {
  if (static_cast<std::size_t>(f.size()) != t.dim()) {
    throw DimensionMismatch("vector dimension does not match operator");
  }
  return t.matrix().cast<std::complex<double>>() * f;
}

RealVector apply(const Operator& t, const RealVector& f) {
  if (static_cast<std::size_t>(f.size()) != t.dim()) {
    throw DimensionMismatch("vector dimension does not match operator");
  }
  return t.matrix() * f;
}

Operator matrix_power(const Operator& t, std::size_t n) {
  const auto d = static_cast<Eigen::Index>(t.dim());
  Matrix result = Matrix::Identity(d, d);
  Matrix base = t.matrix();
  std::size_t e = n;
  while (e > 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e > 0) base = base * base;
  }
  return t.with_matrix(std::move(result), t.label() + "^" + std::to_string(n));
}

Matrix power_sum(const Matrix& t, std::size_t n) {
  const Eigen::Index d = t.rows();
  Matrix sum = Matrix::Zero(d, d);     // Σ_{k<m} T^k
  Matrix power = Matrix::Identity(d, d);  // T^m
  if (n == 0) return sum;
  int top = 63;
  while (((n >> top) & 1U) == 0) --top;
  for (int bit = top; bit >= 0; --bit) {
    // m -> 2m
    sum = sum + power * sum;
    power = power * power;
    if ((n >> bit) & 1U) {
      // m -> m + 1
      sum += power;
      power = power * t;
    }
  }
  return sum;
}

Operator cesaro_mean(const Operator& t, std::size_t n) {
  if (n == 0) throw InvalidArgument("Cesaro mean needs n >= 1");
  Matrix mean = power_sum(t.matrix(), n) / static_cast<double>(n);
  // Rounding in the doubling sums can leave -1e-17 where the exact value is 0.
  mean = mean.cwiseMax(0.0);
  return t.with_matrix(std::move(mean), "cesaro(" + t.label() + "," + std::to_string(n) + ")");
}

Operator normalize_rows(const Operator& t) {
  Matrix m = t.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double s = m.row(i).sum();
    if (s > 0.0) m.row(i) /= s;
  }
  return t.with_matrix(std::move(m), t.label());
}

Operator sinkhorn_normalize(const Operator& t, double tol, std::size_t max_iter) {
  Matrix m = t.matrix();
  for (std::size_t it = 0; it < max_iter; ++it) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double s = m.row(i).sum();
      if (s <= 0.0) throw InvalidArgument("Sinkhorn scaling needs positive row sums");
      m.row(i) /= s;
    }
    double col_err = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double s = m.col(j).sum();
      if (s <= 0.0) throw InvalidArgument("Sinkhorn scaling needs positive column sums");
      m.col(j) /= s;
    }
    double row_err = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      row_err = std::max(row_err, std::abs(m.row(i).sum() - 1.0));
    }
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      col_err = std::max(col_err, std::abs(m.col(j).sum() - 1.0));
    }
    if (row_err <= tol && col_err <= tol) break;
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) /= m.row(i).sum();
  return t.with_matrix(std::move(m), t.label());
}

const char* to_string(NormKind kind) {
  switch (kind) {
    case NormKind::InducedInf: return "induced_inf";
    case NormKind::InducedOne: return "induced_one";
    case NormKind::RieszThorin: return "riesz_thorin";
  }
  return "?";
}

double induced_inf_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double induced_one_norm(const Matrix& m, const RealVector& weights) {
  if (m.size() == 0) return 0.0;
  double best = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double col = m.col(j).cwiseAbs().dot(weights) / weights[j];
    best = std::max(best, col);
  }
  return best;
}

PowerBound power_bound_estimate(const Operator& t, std::size_t horizon,
                                std::optional<double> spr, double tol) {
  if (horizon == 0) throw InvalidArgument("power bound horizon must be >= 1");
  const SpaceSemantics& space = t.space();
  PowerBound out;
  const double p = space.p();
  if (space.kind() == SpaceKind::CKGrid || std::isinf(p)) {
    out.norm_used = NormKind::InducedInf;
  } else if (p == 1.0) {
    out.norm_used = NormKind::InducedOne;
  } else {
    out.norm_used = NormKind::RieszThorin;
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  double gelfand = kInf;
  Matrix power = t.matrix();
  out.norms.reserve(horizon);
  for (std::size_t n = 1; n <= horizon; ++n) {
    if (n > 1) power = power * t.matrix();
    double one = induced_one_norm(power, space.weights());
    double inf = induced_inf_norm(power);
    if (!std::isfinite(one) || !std::isfinite(inf)) one = inf = kInf;
    double selected = inf;
    if (out.norm_used == NormKind::InducedOne) {
      selected = one;
    } else if (out.norm_used == NormKind::RieszThorin) {
      // ‖T‖_p ≤ ‖T‖_1^{1/p} ‖T‖_∞^{1-1/p}
      selected = std::pow(one, 1.0 / p) * std::pow(inf, 1.0 - 1.0 / p);
    }
    out.sup_induced_one = std::max(out.sup_induced_one, one);
    out.sup_induced_inf = std::max(out.sup_induced_inf, inf);
    out.sup_norm = std::max(out.sup_norm, selected);
    out.norms.push_back(selected);
    gelfand = std::min(gelfand, std::pow(selected, 1.0 / static_cast<double>(n)));
  }

  out.spr_used = spr.value_or(gelfand);
  if (spr && *spr > 1.0 + tol) {
    out.bounded_guess = false;
  } else if (out.spr_used < 1.0 - tol) {
    out.bounded_guess = true;
  } else {
    const std::size_t total = horizon + 1;
    const std::size_t quarter = (total + 3) / 4;
    auto value = [&](std::size_t k) { return k == 0 ? 1.0 : out.norms[k - 1]; };
    auto max_before = [&](std::size_t end) {
      double m = 0.0;
      for (std::size_t k = 0; k < end; ++k) m = std::max(m, value(k));
      return m;
    };
    const double all = max_before(total);
    const double head = max_before(total - quarter);
    if (!std::isfinite(all)) {
      out.bounded_guess = false;
    } else if (all <= head * (1.0 + 1e-9)) {
      out.bounded_guess = true;
    } else if (total >= 2 * quarter + 1) {
      const double earlier = max_before(total - 2 * quarter);
      out.bounded_guess = all - head <= 0.5 * (head - earlier);
    } else {
      out.bounded_guess = false;
    }
  }
  return out;
}

}  // namespace posop
