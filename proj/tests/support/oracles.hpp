#ifndef POSOP_TESTS_ORACLES_HPP
#define POSOP_TESTS_ORACLES_HPP

// Independent reference computations. None of these call into the library
// beyond its value types.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <cstddef>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

/// gcd of the lengths of all simple cycles of the digraph j → i iff a(i,j) > 0.
/// Exponential; intended for dim ≤ 7.
inline std::size_t cycle_gcd(const Matrix& a) {
  const auto n = static_cast<std::size_t>(a.rows());
  std::size_t g = 0;
  std::vector<bool> on_path(n, false);
  // Cycles are enumerated from their smallest vertex.
  auto dfs = [&](auto&& self, std::size_t start, std::size_t v, std::size_t len) -> void {
    for (std::size_t w = start; w < n; ++w) {
      if (!(a(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(v)) > 0.0)) continue;
      if (w == start) {
        g = std::gcd(g, len + 1);
      } else if (!on_path[w]) {
        on_path[w] = true;
        self(self, start, w, len + 1);
        on_path[w] = false;
      }
    }
  };
  for (std::size_t s = 0; s < n; ++s) {
    on_path[s] = true;
    dfs(dfs, s, s, 0);
    on_path[s] = false;
  }
  return g;
}

/// Strong connectivity by Warshall closure of the pattern.
inline bool strongly_connected(const Matrix& a) {
  const auto n = a.rows();
  Eigen::MatrixXi r = (a.array() > 0.0).cast<int>();
  for (Eigen::Index i = 0; i < n; ++i) r(i, i) = 1;
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (r(i, k) && r(k, j)) r(i, j) = 1;
  return r.minCoeff() == 1;
}

inline std::vector<Complex> eigen_eigenvalues(const Matrix& a) {
  Eigen::EigenSolver<Matrix> es(a, false);
  std::vector<Complex> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

/// Greedy nearest matching of two multisets; true when every element of `a`
/// pairs with a distinct element of `b` within tol and the sizes agree.
inline bool multiset_match(std::vector<Complex> a, std::vector<Complex> b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const Complex& x : a) {
    std::size_t best = b.size();
    double best_d = tol;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - b[j]);
      if (d <= best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == b.size()) return false;
    used[best] = true;
  }
  return true;
}

inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  Matrix c = Matrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (Eigen::Index k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  return c;
}

inline Matrix naive_power(const Matrix& a, std::size_t n) {
  Matrix r = Matrix::Identity(a.rows(), a.cols());
  for (std::size_t k = 0; k < n; ++k) r = naive_matmul(r, a);
  return r;
}

inline Vector naive_apply(const Matrix& a, const Vector& f) {
  Vector out = Vector::Zero(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out[i] += a(i, j) * f[j];
  return out;
}

/// Index sets compared as sets: f_i > 0 ⇒ g_i > 0.
inline bool mask_inclusion(const Vector& f, const Vector& g) {
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (f[i] > 0.0 && !(g[i] > 0.0)) return false;
  return true;
}

inline std::vector<bool> positive_entries(const Vector& v) {
  std::vector<bool> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v[i] > 0.0;
  return out;
}

/// First n ≤ horizon with supp(T^n f) ⊇ supp(T^{n−1} f), by floating-point
/// iteration with renormalization. Exact when entries of T are either 0 or
/// far above the underflow range.
inline std::optional<std::size_t> expansion_by_iteration(const Matrix& a, Vector f,
                                                         std::size_t horizon) {
  for (std::size_t n = 1; n <= horizon; ++n) {
    Vector next = naive_apply(a, f);
    const double m = next.cwiseAbs().maxCoeff();
    if (m > 0.0) next /= m;
    const auto prev = positive_entries(f);
    const auto cur = positive_entries(next);
    bool contains = true;
    for (std::size_t i = 0; i < prev.size(); ++i)
      if (prev[i] && !cur[i]) contains = false;
    if (contains) return n;
    f = next;
  }
  return std::nullopt;
}

/// min over entries with (T^{n−1})_ij > thr of (T^n)_ij / (T^{n−1})_ij, where
/// thr = 1e-12 · max (T^{n−1}). +infinity when T^{n−1} has no such entry.
inline double ratio_domination(const Matrix& a, std::size_t n) {
  const Matrix prev = naive_power(a, n - 1);
  const Matrix cur = naive_matmul(prev, a);
  const double thr = 1e-12 * prev.cwiseAbs().maxCoeff();
  double eps = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (prev(i, j) > thr) eps = std::min(eps, cur(i, j) / prev(i, j));
  return eps;
}

/// Random non-negative vector with entries in {0} ∪ [lo, 1].
inline Vector sparse_positive(std::size_t dim, double p_zero, double lo, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> val(lo, 1.0);
  Vector v(static_cast<Eigen::Index>(dim));
  for (auto& x : v) x = u(rng) < p_zero ? 0.0 : val(rng);
  return v;
}

/// Random non-negative matrix with entries in {0} ∪ [lo, 1].
inline Matrix sparse_matrix(std::size_t dim, double p_zero, double lo, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> val(lo, 1.0);
  Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = u(rng) < p_zero ? 0.0 : val(rng);
  return m;
}

inline Matrix cyclic_permutation(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) p((j + 1) % n, j) = 1.0;
  return p;
}

inline std::vector<Complex> roots_of_unity(std::size_t d) {
  std::vector<Complex> out;
  for (std::size_t k = 0; k < d; ++k)
    out.push_back(std::polar(1.0, 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(d)));
  return out;
}

}  // namespace oracle

#endif  // POSOP_TESTS_ORACLES_HPP
