#include "posop/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "posop/errors.hpp"

namespace posop {

namespace {

double sign_of(double magnitude, double s) {
  return s >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

}  // namespace

Eigen::VectorXd balance(Eigen::MatrixXd& a) {
  constexpr double kRadix = 2.0;
  constexpr double kRadixSq = kRadix * kRadix;
  const Eigen::Index n = a.rows();
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(n);
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0;
      double c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / kRadix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= kRadix;
        c *= kRadixSq;
      }
      g = r * kRadix;
      while (c > g) {
        f /= kRadix;
        c /= kRadixSq;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
        scale[i] *= f;
      }
    }
  }
  return scale;
}

void reduce_to_hessenberg(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index len = n - k - 1;
    Eigen::VectorXd x = a.col(k).tail(len);
    const double alpha = x.norm();
    if (alpha == 0.0) continue;
    const double beta = x[0] >= 0.0 ? -alpha : alpha;
    Eigen::VectorXd v = x;
    v[0] -= beta;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    // H = I − 2 v vᵀ applied from both sides on the trailing block.
    auto rows = a.bottomRows(len);
    rows -= 2.0 * v * (v.transpose() * rows);
    auto cols = a.rightCols(len);
    cols -= 2.0 * (cols * v) * v.transpose();
    a(k + 1, k) = beta;
    a.col(k).tail(len - 1).setZero();
  }
}

std::vector<std::complex<double>> hessenberg_qr_eigenvalues(Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<std::complex<double>> w(static_cast<std::size_t>(n));
  std::vector<bool> found(static_cast<std::size_t>(n), false);
  const double eps = std::numeric_limits<double>::epsilon();
  const long max_sweeps = 30L * std::max(n, 1);
  long sweeps = 0;

  double anorm = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
  }
  // Normwise floor for deflation: near-nilpotent blocks have diagonals far
  // below ‖H‖ and never meet the purely relative test.
  const double floor = eps * a.norm();

  auto fail = [&]() {
    std::vector<std::complex<double>> partial;
    for (int i = 0; i < n; ++i) {
      if (found[static_cast<std::size_t>(i)]) partial.push_back(w[static_cast<std::size_t>(i)]);
    }
    throw SolverFailure("QR iteration did not converge within " +
                            std::to_string(max_sweeps) + " sweeps",
                        std::move(partial));
  };
  auto store = [&](int i, std::complex<double> value) {
    w[static_cast<std::size_t>(i)] = value;
    found[static_cast<std::size_t>(i)] = true;
  };

  int nn = n - 1;
  double t = 0.0;  // accumulated exceptional shift
  int l = 0;
  while (nn >= 0) {
    int its = 0;
    do {
      // Look for a negligible subdiagonal element.
      for (l = nn; l > 0; --l) {
        double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) <= eps * s || std::abs(a(l, l - 1)) <= floor) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn) {
        store(nn, x + t);
        --nn;
        continue;
      }
      double y = a(nn - 1, nn - 1);
      double ww = a(nn, nn - 1) * a(nn - 1, nn);
      if (l == nn - 1) {
        const double p = 0.5 * (y - x);
        const double q = p * p + ww;
        double z = std::sqrt(std::abs(q));
        x += t;
        if (q >= 0.0) {
          z = p + sign_of(z, p);
          store(nn - 1, x + z);
          store(nn, z != 0.0 ? x - ww / z : x + z);
        } else {
          store(nn, {x + p, -z});
          store(nn - 1, {x + p, z});
        }
        nn -= 2;
        continue;
      }

      if (++sweeps > max_sweeps) fail();
      if (its > 0 && its % 10 == 0) {
        // Exceptional shift to break cycles of the standard shifts.
        t += x;
        for (int i = 0; i <= nn; ++i) a(i, i) -= x;
        const double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
        x = y = 0.75 * s;
        ww = -0.4375 * s * s;
      }
      ++its;

      // Two consecutive small subdiagonal elements.
      int m = nn - 2;
      double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
      for (; m >= l; --m) {
        z = a(m, m);
        r = x - z;
        double s = y - z;
        p = (r * s - ww) / a(m + 1, m) + a(m, m + 1);
        q = a(m + 1, m + 1) - z - r - s;
        r = a(m + 2, m + 1);
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
        const double v =
            std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
        if (u <= eps * v) break;
      }
      for (int i = m; i < nn - 1; ++i) {
        a(i + 2, i) = 0.0;
        if (i != m) a(i + 2, i - 1) = 0.0;
      }

      // Double-shift QR step on rows l..nn, columns m..nn.
      for (int k = m; k < nn; ++k) {
        if (k != m) {
          p = a(k, k - 1);
          q = a(k + 1, k - 1);
          r = k + 1 != nn ? a(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x != 0.0) {
            p /= x;
            q /= x;
            r /= x;
          }
        }
        const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
        if (s == 0.0) continue;
        if (k == m) {
          if (l != m) a(k, k - 1) = -a(k, k - 1);
        } else {
          a(k, k - 1) = -s * x;
        }
        p += s;
        x = p / s;
        y = q / s;
        z = r / s;
        q /= p;
        r /= p;
        for (int j = k; j <= nn; ++j) {
          p = a(k, j) + q * a(k + 1, j);
          if (k + 1 != nn) {
            p += r * a(k + 2, j);
            a(k + 2, j) -= p * z;
          }
          a(k + 1, j) -= p * y;
          a(k, j) -= p * x;
        }
        const int mmin = nn < k + 3 ? nn : k + 3;
        for (int i = l; i <= mmin; ++i) {
          p = x * a(i, k) + y * a(i, k + 1);
          if (k + 1 != nn) {
            p += z * a(i, k + 2);
            a(i, k + 2) -= p * r;
          }
          a(i, k + 1) -= p * q;
          a(i, k) -= p;
        }
      }
    } while (l + 1 < nn);
  }
  return w;
}

std::vector<std::complex<double>> dense_eigenvalues(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("eigenvalues need a square matrix");
  if (a.rows() == 0) return {};
  if (!a.allFinite()) throw InvalidArgument("matrix has non-finite entries");
  Eigen::MatrixXd h = a;
  balance(h);
  reduce_to_hessenberg(h);
  return hessenberg_qr_eigenvalues(h);
}

std::vector<std::vector<std::size_t>> irreducible_blocks(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("blocks need a square matrix");
  const auto n = static_cast<std::size_t>(a.rows());
  std::vector<std::vector<std::size_t>> out_edges(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0) {
        out_edges[j].push_back(i);
      }
    }
  }

  // Iterative Tarjan.
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::vector<std::size_t>> blocks;
  std::size_t counter = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    std::vector<std::pair<std::size_t, std::size_t>> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < out_edges[v].size()) {
        const std::size_t w = out_edges[v][next++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      frames.pop_back();
      if (!frames.empty()) {
        const std::size_t parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        std::vector<std::size_t> block;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          block.push_back(w);
        } while (w != done);
        std::sort(block.begin(), block.end());
        blocks.push_back(std::move(block));
      }
    }
  }
  // Tarjan emits sinks first.
  std::reverse(blocks.begin(), blocks.end());
  return blocks;
}

std::vector<std::complex<double>> block_eigenvalues(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("eigenvalues need a square matrix");
  if (!a.allFinite()) throw InvalidArgument("matrix has non-finite entries");
  std::vector<std::complex<double>> out;
  out.reserve(static_cast<std::size_t>(a.rows()));
  for (const auto& block : irreducible_blocks(a)) {
    const auto k = static_cast<Eigen::Index>(block.size());
    if (k == 1) {
      const auto i = static_cast<Eigen::Index>(block[0]);
      out.emplace_back(a(i, i), 0.0);
      continue;
    }
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) {
        sub(r, c) = a(static_cast<Eigen::Index>(block[static_cast<std::size_t>(r)]),
                      static_cast<Eigen::Index>(block[static_cast<std::size_t>(c)]));
      }
    }
    try {
      const auto values = dense_eigenvalues(sub);
      out.insert(out.end(), values.begin(), values.end());
    } catch (const SolverFailure& e) {
      out.insert(out.end(), e.partial().begin(), e.partial().end());
      throw SolverFailure(e.what(), std::move(out));
    }
  }
  return out;
}

}  // namespace posop
