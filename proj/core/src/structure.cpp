#include "posop/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <string>

#include "posop/errors.hpp"

namespace posop {

namespace {

double resolve_tau(const Matrix& m, double tau) {
  return tau < 0.0 ? default_entry_threshold(m) : tau;
}

// Fixed-width bitset over grid indices.
class IndexSet {
 public:
  explicit IndexSet(std::size_t dim) : words_((dim + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

  void unite(const IndexSet& other) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
  }

  bool includes(const IndexSet& other) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      if (other.words_[k] & ~words_[k]) return false;
    }
    return true;
  }

  template <typename F>
  void for_each(F&& fn) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        const int bit = __builtin_ctzll(w);
        fn(k * 64 + static_cast<std::size_t>(bit));
        w &= w - 1;
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

// Column images: image[j] = supp(T e_j).
std::vector<IndexSet> column_images(const Matrix& m, double tau) {
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<IndexSet> image(n, IndexSet(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > tau) {
        image[j].set(i);
      }
    }
  }
  return image;
}

IndexSet step(const std::vector<IndexSet>& image, const IndexSet& s, std::size_t dim) {
  IndexSet next(dim);
  s.for_each([&](std::size_t j) { next.unite(image[j]); });
  return next;
}

std::optional<std::size_t> first_expansion(const std::vector<IndexSet>& image,
                                           IndexSet current, std::size_t dim,
                                           std::size_t horizon) {
  for (std::size_t n = 1; n <= horizon; ++n) {
    IndexSet next = step(image, current, dim);
    if (next.includes(current)) return n;
    current = std::move(next);
  }
  return std::nullopt;
}

void require_nonneg(const RealVector& f) {
  if (!f.allFinite()) throw InvalidArgument("vector has non-finite entries");
  if ((f.array() < 0.0).any()) throw InvalidArgument("vector must be non-negative");
}

std::vector<bool> reachable(const SupportGraph& g, std::size_t start, bool reverse) {
  std::vector<std::vector<std::size_t>> in;
  if (reverse) {
    in.assign(g.dim, {});
    for (std::size_t j = 0; j < g.dim; ++j) {
      for (std::size_t i : g.out[j]) in[i].push_back(j);
    }
  }
  const auto& adj = reverse ? in : g.out;
  std::vector<bool> seen(g.dim, false);
  std::vector<std::size_t> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

double default_entry_threshold(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return kDefaultSupportTol * m.cwiseAbs().maxCoeff();
}

bool SupportGraph::has_edge(std::size_t from, std::size_t to) const {
  const auto& o = out[from];
  return std::binary_search(o.begin(), o.end(), to);
}

SupportGraph support_graph(const Operator& t, double tau) {
  const Matrix& m = t.matrix();
  SupportGraph g;
  g.dim = t.dim();
  g.tau = resolve_tau(m, tau);
  g.out.assign(g.dim, {});
  for (std::size_t j = 0; j < g.dim; ++j) {
    for (std::size_t i = 0; i < g.dim; ++i) {
      if (m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > g.tau) {
        g.out[j].push_back(i);
      }
    }
  }
  return g;
}

bool is_irreducible(const Operator& t, double tau) {
  const SupportGraph g = support_graph(t, tau);
  const auto fwd = reachable(g, 0, false);
  const auto bwd = reachable(g, 0, true);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

std::size_t period(const Operator& t, double tau) {
  const SupportGraph g = support_graph(t, tau);
  if (!is_irreducible(t, g.tau)) {
    throw ReducibleOperator("period is only defined for irreducible operators");
  }
  // BFS levels from node 0; every edge u → v closes walks of length
  // level[u] + 1 − level[v] modulo the period.
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> level(g.dim, kUnset);
  std::queue<std::size_t> queue;
  level[0] = 0;
  queue.push(0);
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop();
    for (std::size_t v : g.out[u]) {
      if (level[v] == kUnset) {
        level[v] = level[u] + 1;
        queue.push(v);
      }
    }
  }
  std::size_t d = 0;
  for (std::size_t u = 0; u < g.dim; ++u) {
    for (std::size_t v : g.out[u]) {
      const auto diff = static_cast<long long>(level[u]) + 1 - static_cast<long long>(level[v]);
      d = std::gcd(d, static_cast<std::size_t>(std::llabs(diff)));
    }
  }
  if (d == 0) throw InvalidArgument("support graph has no cycle; period undefined");
  return d;
}

std::optional<std::size_t> expands_support(const Operator& t, const RealVector& f,
                                           std::size_t horizon, double tau) {
  if (static_cast<std::size_t>(f.size()) != t.dim()) {
    throw DimensionMismatch("vector dimension does not match operator");
  }
  require_nonneg(f);
  if (horizon == 0) throw InvalidArgument("horizon must be >= 1");
  const std::size_t n = t.dim();
  const auto image = column_images(t.matrix(), resolve_tau(t.matrix(), tau));
  IndexSet start(n);
  const SupportMask mask = support(f);
  for (std::size_t i : mask.indices()) start.set(i);
  return first_expansion(image, std::move(start), n, horizon);
}

std::vector<std::size_t> ExpansionResult::witnesses() const {
  std::vector<std::size_t> out;
  for (const auto& b : per_basis_vector) {
    if (!b.first_n) out.push_back(b.index);
  }
  return out;
}

std::optional<std::size_t> ExpansionResult::max_first_n() const {
  std::size_t best = 0;
  for (const auto& b : per_basis_vector) {
    if (!b.first_n) return std::nullopt;
    best = std::max(best, *b.first_n);
  }
  return best;
}

ExpansionResult expands_support_everywhere(const Operator& t, std::size_t horizon,
                                           std::size_t samples, std::uint64_t seed,
                                           double tau) {
  if (horizon == 0) throw InvalidArgument("horizon must be >= 1");
  const std::size_t n = t.dim();
  const auto image = column_images(t.matrix(), resolve_tau(t.matrix(), tau));

  ExpansionResult out;
  out.horizon = horizon;
  out.samples = samples;
  out.per_basis_vector.reserve(n);
  bool ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    IndexSet start(n);
    start.set(i);
    auto first = first_expansion(image, std::move(start), n, horizon);
    ok = ok && first.has_value();
    out.per_basis_vector.push_back({i, first});
  }

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution present(0.5);
  for (std::size_t s = 0; s < samples; ++s) {
    IndexSet start(n);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (present(rng)) {
        start.set(i);
        any = true;
      }
    }
    if (!any) start.set(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    if (!first_expansion(image, std::move(start), n, horizon)) ++out.failed_samples;
  }
  out.all_satisfied = ok && out.failed_samples == 0;
  return out;
}

bool expands_support_on_band(const Operator& t, const SupportMask& band, double tau) {
  if (band.empty()) throw InvalidArgument("band S must be non-empty");
  if (band.dim() != t.dim()) throw DimensionMismatch("band dimension does not match operator");
  const double thr = resolve_tau(t.matrix(), tau);
  for (std::size_t i : band.indices()) {
    const auto k = static_cast<Eigen::Index>(i);
    if (!(t.matrix()(k, k) > thr)) return false;
  }
  return true;
}

bool is_lattice_homomorphism(const Operator& t, double tau, std::uint64_t seed) {
  const Matrix& m = t.matrix();
  const double thr = resolve_tau(m, tau);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if ((m.row(i).array() > thr).count() > 1) return false;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  const auto n = m.rows();
  const double scale = std::max(1.0, induced_inf_norm(m));
  for (int trial = 0; trial < 20; ++trial) {
    RealVector f(n), g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      f[i] = coord(rng);
      g[i] = coord(rng);
    }
    const RealVector lhs = m * f.cwiseMax(g);
    const RealVector rhs = (m * f).cwiseMax(m * g);
    // Entries below thr are treated as zero by the row criterion.
    const double slack = 1e-12 * scale + thr * static_cast<double>(n);
    if ((lhs - rhs).cwiseAbs().maxCoeff() > slack) return false;
  }
  return true;
}

double dominates_identity(const Operator& t) {
  if (t.dim() == 0) return 0.0;
  return std::max(0.0, t.matrix().diagonal().minCoeff());
}

DominationResult power_domination(const Operator& t, std::size_t n, double tau) {
  if (n == 0) throw InvalidArgument("power_domination needs n >= 1");
  const Matrix prev = matrix_power(t, n - 1).matrix();
  const Matrix next = n == 1 ? t.matrix() : Matrix(prev * t.matrix());
  const double tau_prev = tau < 0.0 ? default_entry_threshold(prev) : tau;
  const double tau_next = tau < 0.0 ? default_entry_threshold(next) : tau;

  DominationResult out;
  out.n = n;
  out.epsilon_max = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < prev.cols(); ++j) {
    for (Eigen::Index i = 0; i < prev.rows(); ++i) {
      const double den = prev(i, j);
      if (!(den > tau_prev)) continue;
      const double num = next(i, j);
      const double ratio = num > tau_next ? num / den : 0.0;
      if (ratio < out.epsilon_max) {
        out.epsilon_max = ratio;
        out.witness_entry = {static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
      }
    }
  }
  return out;
}

SuperFixed is_super_fixed(const Operator& t, const RealVector& f, double tau) {
  if (static_cast<std::size_t>(f.size()) != t.dim()) {
    throw DimensionMismatch("vector dimension does not match operator");
  }
  require_nonneg(f);
  const RealVector tf = t.matrix() * f;
  SuperFixed out;
  out.super_fixed = ((tf - f).array() >= -tau).all();
  const double fnorm = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
  out.fixed = f.size() == 0 || (tf - f).cwiseAbs().maxCoeff() <= tau * fnorm;
  return out;
}

}  // namespace posop
