#include "posop/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "posop/eigensolver.hpp"
#include "posop/errors.hpp"

namespace posop {

namespace {

using ComplexMatrix = Eigen::MatrixXcd;

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

double inverse_iteration_residual(const ComplexMatrix& t, Complex lambda, double scale) {
  const Eigen::Index n = t.rows();
  double shift = 1e-14 * scale;
  for (int attempt = 0; attempt < 4; ++attempt, shift *= 1e3) {
    const ComplexMatrix a = t - (lambda + shift) * ComplexMatrix::Identity(n, n);
    const Eigen::PartialPivLU<ComplexMatrix> lu(a);
    // A generic start: the all-ones vector is an exact eigenvector of every
    // stochastic matrix and would trap the iteration.
    Eigen::VectorXcd v(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      v[k] = std::polar(1.0 + 0.5 * std::sin(static_cast<double>(3 * k + 1)),
                        0.6180339887 * static_cast<double>(k));
    }
    v.normalize();
    bool finite = true;
    for (int it = 0; it < 3 && finite; ++it) {
      v = lu.solve(v);
      const double nv = v.norm();
      finite = v.allFinite() && nv > 0.0 && std::isfinite(nv);
      if (finite) v /= nv;
    }
    if (finite) return (t * v - lambda * v).norm();
  }
  return std::numeric_limits<double>::infinity();
}

// Complex Schur form via the real Schur form: each 2×2 block is split by a
// complex Givens rotation. Eigen's ComplexSchur stalls on some highly
// degenerate non-negative matrices where the real iteration converges.
void complex_schur(const Matrix& m, ComplexMatrix& u, ComplexMatrix& z) {
  Eigen::RealSchur<Matrix> schur(m);
  if (schur.info() != Eigen::Success) {
    throw SolverFailure("real Schur decomposition did not converge", {});
  }
  u = schur.matrixT().cast<Complex>();
  z = schur.matrixU().cast<Complex>();
  const Eigen::Index n = u.rows();
  for (Eigen::Index k = n - 1; k >= 1; --k) {
    const Complex sub = u(k, k - 1);
    if (sub == 0.0) continue;
    const Complex a = u(k - 1, k - 1), b = u(k - 1, k), d = u(k, k);
    const Complex half = 0.5 * (a + d);
    const Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * sub);
    const Complex mu = half + disc - d;
    const double r = std::hypot(std::abs(mu), std::abs(sub));
    const Complex c = mu / r, s = sub / r;
    Eigen::Matrix2cd g;
    g << std::conj(c), s, -s, c;
    u.block(k - 1, k - 1, 2, n - k + 1) = g * u.block(k - 1, k - 1, 2, n - k + 1);
    u.block(0, k - 1, k + 1, 2) = u.block(0, k - 1, k + 1, 2) * g.adjoint();
    z.middleCols(k - 1, 2) = z.middleCols(k - 1, 2) * g.adjoint();
    u(k, k - 1) = 0.0;
  }
}

// Swaps the adjacent diagonal entries j and j+1 of the triangular u.
void swap_adjacent(ComplexMatrix& u, ComplexMatrix& z, Eigen::Index j) {
  const Eigen::Index n = u.rows();
  const Complex a = u(j, j);
  const Complex b = u(j, j + 1);
  const Complex c = u(j + 1, j + 1);
  Eigen::Vector2cd x(b, c - a);
  const double nrm = x.norm();
  if (nrm == 0.0) return;
  x /= nrm;
  Eigen::Matrix2cd q;
  q << x[0], -std::conj(x[1]), x[1], std::conj(x[0]);
  u.block(j, j, 2, n - j) = q.adjoint() * u.block(j, j, 2, n - j);
  u.block(0, j, j + 2, 2) = u.block(0, j, j + 2, 2) * q;
  z.middleCols(j, 2) = z.middleCols(j, 2) * q;
  u(j + 1, j) = 0.0;
}

Matrix clip_small_negatives(Matrix p) {
  return p.cwiseMax(0.0);
}

}  // namespace

std::size_t Spectrum::total_multiplicity() const {
  std::size_t total = 0;
  for (const auto& e : eigenvalues) total += e.multiplicity;
  return total;
}

std::vector<Complex> Spectrum::values() const {
  std::vector<Complex> out;
  out.reserve(eigenvalues.size());
  for (const auto& e : eigenvalues) out.push_back(e.value);
  return out;
}

Spectrum eigenvalues(const Matrix& m, double tol) {
  if (m.rows() == 0) throw InvalidArgument("eigenvalues need dim >= 1");
  if (!(tol > 0.0)) throw InvalidArgument("eigenvalue tolerance must be positive");
  Spectrum s;
  s.tol = tol;
  s.norm_inf = induced_inf_norm(m);
  s.raw = block_eigenvalues(m);

  const double ctol = s.cluster_tol();
  const std::size_t n = s.raw.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(s.raw[i] - s.raw[j]) <= ctol) {
        parent[find_root(parent, i)] = find_root(parent, j);
      }
    }
  }
  std::vector<Complex> sum(n, 0.0);
  std::vector<std::size_t> count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find_root(parent, i);
    sum[r] += s.raw[i];
    ++count[r];
  }

  const ComplexMatrix tc = m.cast<Complex>();
  for (std::size_t r = 0; r < n; ++r) {
    if (count[r] == 0) continue;
    EigenPair e;
    e.value = sum[r] / static_cast<double>(count[r]);
    e.multiplicity = count[r];
    e.residual = inverse_iteration_residual(tc, e.value, 1.0 + s.norm_inf);
    s.eigenvalues.push_back(e);
    s.spr = std::max(s.spr, std::abs(e.value));
  }

  // Modulus is quantized so that rounding noise cannot reorder a ring of
  // equal-modulus eigenvalues; ties break by argument in (−π, π].
  auto key = [](const EigenPair& e) {
    const double arg = e.value.imag() == 0.0 && e.value.real() < 0.0
                           ? M_PI
                           : std::arg(e.value);
    return std::make_pair(-std::llround(std::abs(e.value) * 1e9), arg);
  };
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end(),
            [&](const EigenPair& a, const EigenPair& b) { return key(a) < key(b); });
  return s;
}

Spectrum eigenvalues(const Operator& t, double tol) {
  return eigenvalues(t.matrix(), tol);
}

std::vector<Complex> unimodular_point_spectrum(const Spectrum& s, double tol) {
  std::vector<Complex> out;
  for (const auto& e : s.eigenvalues) {
    if (std::abs(std::abs(e.value) - 1.0) <= tol) out.push_back(e.value);
  }
  return out;
}

std::vector<Complex> peripheral_spectrum(const Spectrum& s, double tol) {
  std::vector<Complex> out;
  for (const auto& e : s.eigenvalues) {
    if (std::abs(e.value) >= s.spr - tol) out.push_back(e.value);
  }
  return out;
}

bool is_cyclic(const std::vector<Complex>& set, double tol) {
  const auto bound = static_cast<long>(set.size()) + 1;
  auto member = [&](Complex z) {
    return std::any_of(set.begin(), set.end(),
                       [&](Complex w) { return std::abs(w - z) <= tol; });
  };
  for (Complex lambda : set) {
    const double r = std::abs(lambda);
    const double theta = std::arg(lambda);
    for (long k = -bound; k <= bound; ++k) {
      if (!member(std::polar(r, static_cast<double>(k) * theta))) return false;
    }
  }
  return true;
}

bool disk_inclusion(const Spectrum& s, double epsilon, double tol) {
  if (epsilon < 0.0) throw InvalidArgument("disk_inclusion needs epsilon >= 0");
  if (epsilon > s.spr + tol) throw InvalidArgument("disk_inclusion needs epsilon <= spr");
  const double radius = s.spr - epsilon;
  return std::all_of(s.eigenvalues.begin(), s.eigenvalues.end(), [&](const EigenPair& e) {
    return std::abs(e.value - epsilon) <= radius + tol;
  });
}

OrderedSchur ordered_schur(const Matrix& m, const std::function<bool(Complex)>& select) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidArgument("Schur form needs a non-empty square matrix");
  }
  OrderedSchur out;
  complex_schur(m, out.u, out.z);
  const Eigen::Index n = out.u.rows();
  Eigen::Index next = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!select(out.u(k, k))) continue;
    for (Eigen::Index j = k - 1; j >= next; --j) swap_adjacent(out.u, out.z, j);
    ++next;
  }
  out.selected = static_cast<std::size_t>(next);
  return out;
}

Matrix spectral_projection(const Matrix& m, const std::function<bool(Complex)>& select) {
  const OrderedSchur os = ordered_schur(m, select);
  const auto n = os.u.rows();
  const auto k = static_cast<Eigen::Index>(os.selected);
  if (k == 0) return Matrix::Zero(n, n);
  if (k == n) return Matrix::Identity(n, n);

  // Solve U11 Y − Y U22 = U12 column by column.
  const auto u11 = os.u.topLeftCorner(k, k);
  const auto u12 = os.u.topRightCorner(k, n - k);
  const auto u22 = os.u.bottomRightCorner(n - k, n - k);
  ComplexMatrix y(k, n - k);
  for (Eigen::Index j = 0; j < n - k; ++j) {
    Eigen::VectorXcd rhs = u12.col(j);
    for (Eigen::Index i = 0; i < j; ++i) rhs += y.col(i) * u22(i, j);
    ComplexMatrix shifted = u11;
    shifted.diagonal().array() -= u22(j, j);
    y.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  ComplexMatrix block = ComplexMatrix::Zero(n, n);
  block.topLeftCorner(k, k).setIdentity();
  block.topRightCorner(k, n - k) = y;
  const ComplexMatrix p = os.z * block * os.z.adjoint();
  return p.real();
}

std::size_t numerical_rank(const Matrix& m, double threshold) {
  if (m.size() == 0) return 0;
  const Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  return static_cast<std::size_t>((sv.array() > threshold).count());
}

double rank_tolerance(const Matrix& m) {
  return static_cast<double>(m.rows()) * std::numeric_limits<double>::epsilon() *
         induced_inf_norm(m);
}

JdlgProjection jdlg_projection(const Operator& t, double tol) {
  const Spectrum s = eigenvalues(t);
  if (s.spr > 1.0 + tol) {
    throw PowerUnbounded("spectral radius " + std::to_string(s.spr) + " exceeds 1");
  }
  if (!spectrally_power_bounded(s, t.matrix(), tol)) {
    throw PowerUnbounded("eigenvalue 1 is not semisimple");
  }

  const Matrix& m = t.matrix();
  auto unimodular = [tol](Complex z) { return std::abs(z) >= 1.0 - tol; };
  JdlgProjection out;
  out.p = spectral_projection(m, unimodular);
  out.reversible_dim = ordered_schur(m, unimodular).selected;
  out.positive = out.p.size() == 0 || out.p.minCoeff() >= -1e-8;
  out.idempotence_error = induced_inf_norm(out.p * out.p - out.p);
  out.commutator_error = induced_inf_norm(out.p * m - m * out.p);
  return out;
}

Matrix eigenprojection_at_one(const Matrix& m, double tol) {
  return spectral_projection(m, [tol](Complex z) { return std::abs(z - 1.0) <= tol; });
}

std::optional<Operator> mean_ergodic_projection(const Operator& t, std::size_t k_max,
                                                double tol) {
  if (k_max < 2) throw InvalidArgument("mean_ergodic_projection needs k_max >= 2");
  const std::size_t half = k_max / 2;
  const Matrix a = power_sum(t.matrix(), half) / static_cast<double>(half);
  const Matrix b = power_sum(t.matrix(), k_max) / static_cast<double>(k_max);
  if (!a.allFinite() || !b.allFinite()) return std::nullopt;
  if ((a - b).cwiseAbs().maxCoeff() > tol) return std::nullopt;
  return t.with_matrix(clip_small_negatives(b), "mean_ergodic(" + t.label() + ")");
}

const char* to_string(ConvergenceClass c) {
  switch (c) {
    case ConvergenceClass::ConvergesStrongly: return "ConvergesStrongly";
    case ConvergenceClass::DivergesOrOscillates: return "DivergesOrOscillates";
    case ConvergenceClass::Inconclusive: return "Inconclusive";
  }
  return "?";
}

bool eigenvalue_one_semisimple(const Matrix& m, double tol) {
  const OrderedSchur os =
      ordered_schur(m, [tol](Complex z) { return std::abs(z - 1.0) <= tol; });
  const auto k = static_cast<Eigen::Index>(os.selected);
  if (k == 0) return true;
  ComplexMatrix n = os.u.topLeftCorner(k, k);
  n.diagonal().array() -= 1.0;
  const double threshold = tol * (1.0 + induced_inf_norm(m));
  auto rank = [threshold](const ComplexMatrix& x) {
    const Eigen::JacobiSVD<ComplexMatrix> svd(x);
    return (svd.singularValues().array() > threshold).count();
  };
  return rank(n) == rank(n * n);
}

bool spectrally_power_bounded(const Spectrum& s, const Matrix& m, double tol) {
  if (s.spr > 1.0 + tol) return false;
  if (s.spr < 1.0 - tol) return true;
  return eigenvalue_one_semisimple(m, tol);
}

ConvergenceVerdict classify_power_convergence(const Spectrum& s, const Operator& t,
                                              const ConvergenceOptions& options) {
  const double tol = options.tol;
  bool diverges = false;
  bool has_one = false;
  for (const auto& e : s.eigenvalues) {
    const double mod = std::abs(e.value);
    if (mod > 1.0 + tol) diverges = true;
    const bool near_one = std::abs(e.value - 1.0) <= tol;
    if (std::abs(mod - 1.0) <= tol && !near_one) diverges = true;
    has_one = has_one || near_one;
  }

  ConvergenceVerdict out;
  const Matrix& m = t.matrix();
  if (diverges) {
    out.theoretical = ConvergenceClass::DivergesOrOscillates;
  } else {
    out.one_semisimple = !has_one || eigenvalue_one_semisimple(m, tol);
    out.theoretical = out.one_semisimple ? ConvergenceClass::ConvergesStrongly
                                         : ConvergenceClass::Inconclusive;
  }

  if (out.theoretical == ConvergenceClass::ConvergesStrongly) {
    Matrix p = eigenprojection_at_one(m, tol);
    if (p.size() == 0 || p.minCoeff() >= -1e-8) {
      out.limit = t.with_matrix(clip_small_negatives(std::move(p)), "limit(" + t.label() + ")");
    }
  }

  const std::size_t cap = out.theoretical == ConvergenceClass::DivergesOrOscillates
                              ? std::min(options.k_max, options.divergent_k_cap)
                              : options.k_max;
  const auto n = m.rows();
  Matrix power = Matrix::Identity(n, n);  // T^k
  for (std::size_t k = 0; k <= cap; ++k) {
    Matrix next = power * m;
    const double step = induced_inf_norm(next - power);
    out.empirical.iterations = k;
    out.empirical.final_residual = step;
    if (!std::isfinite(step)) break;
    if (step <= options.step_threshold) {
      out.empirical.k_star = k;
      break;
    }
    power = std::move(next);
  }
  return out;
}

}  // namespace posop
