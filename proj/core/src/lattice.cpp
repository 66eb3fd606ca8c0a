#include "posop/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "posop/errors.hpp"

namespace posop {

namespace {

void require_finite(const RealVector& v, const char* what) {
  if (!v.allFinite()) {
    throw InvalidArgument(std::string(what) + " has non-finite entries");
  }
}

void require_same_dim(const RealVector& f, const RealVector& g) {
  if (f.size() != g.size()) {
    throw DimensionMismatch("vector dimensions differ: " +
                            std::to_string(f.size()) + " vs " +
                            std::to_string(g.size()));
  }
}

void require_nonneg(const RealVector& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] < 0.0) {
      throw InvalidArgument(std::string(what) + " has a negative entry at " +
                            std::to_string(i));
    }
  }
}

double lp_norm(const RealVector& v, double p) {
  if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
  if (p == 1.0) return v.cwiseAbs().sum();
  double acc = 0.0;
  for (double x : v) acc += std::pow(std::abs(x), p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace

SupportMask::SupportMask(std::size_t dim, std::vector<std::size_t> indices,
                         SupportSemantics semantics)
    : dim_(dim), indices_(std::move(indices)), semantics_(semantics) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  if (!indices_.empty() && indices_.back() >= dim_) {
    throw InvalidArgument("support index " + std::to_string(indices_.back()) +
                          " out of range for dim " + std::to_string(dim_));
  }
}

SupportMask SupportMask::none(std::size_t dim, SupportSemantics semantics) {
  return SupportMask(dim, {}, semantics);
}

SupportMask SupportMask::all(std::size_t dim, SupportSemantics semantics) {
  std::vector<std::size_t> idx(dim);
  for (std::size_t i = 0; i < dim; ++i) idx[i] = i;
  return SupportMask(dim, std::move(idx), semantics);
}

bool SupportMask::contains(std::size_t i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

SupportMask SupportMask::intersect(const SupportMask& other) const {
  if (dim_ != other.dim_ || semantics_ != other.semantics_) {
    throw DimensionMismatch("cannot intersect incomparable masks");
  }
  std::vector<std::size_t> out;
  std::set_intersection(indices_.begin(), indices_.end(),
                        other.indices_.begin(), other.indices_.end(),
                        std::back_inserter(out));
  return SupportMask(dim_, std::move(out), semantics_);
}

SupportMask SupportMask::unite(const SupportMask& other) const {
  if (dim_ != other.dim_ || semantics_ != other.semantics_) {
    throw DimensionMismatch("cannot unite incomparable masks");
  }
  std::vector<std::size_t> out;
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(),
                 other.indices_.end(), std::back_inserter(out));
  return SupportMask(dim_, std::move(out), semantics_);
}

SupportMask support(const RealVector& v, double tau, SupportSemantics semantics) {
  if (tau < 0.0) throw InvalidArgument("support threshold must be >= 0");
  std::vector<std::size_t> idx;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > tau) idx.push_back(static_cast<std::size_t>(i));
  }
  return SupportMask(static_cast<std::size_t>(v.size()), std::move(idx), semantics);
}

SupportMask support(const ComplexVector& v, double tau,
                    SupportSemantics semantics) {
  if (tau < 0.0) throw InvalidArgument("support threshold must be >= 0");
  std::vector<std::size_t> idx;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > tau) idx.push_back(static_cast<std::size_t>(i));
  }
  return SupportMask(static_cast<std::size_t>(v.size()), std::move(idx), semantics);
}

double default_support_threshold(const RealVector& v) {
  if (v.size() == 0) return 0.0;
  return kDefaultSupportTol * v.cwiseAbs().maxCoeff();
}

SupportMask support(const RealVector& v) {
  return support(v, default_support_threshold(v));
}

bool mask_subseteq(const SupportMask& a, const SupportMask& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("mask dimensions differ: " + std::to_string(a.dim()) +
                            " vs " + std::to_string(b.dim()));
  }
  if (a.semantics() != b.semantics()) {
    throw DimensionMismatch("masks carry different support semantics");
  }
  return std::includes(b.indices().begin(), b.indices().end(),
                       a.indices().begin(), a.indices().end());
}

LatticeParts lattice_ops(const RealVector& f, const RealVector& g) {
  require_same_dim(f, g);
  require_finite(f, "f");
  require_finite(g, "g");
  LatticeParts out;
  out.inf = f.cwiseMin(g);
  out.sup = f.cwiseMax(g);
  out.pos = f.cwiseMax(0.0);
  out.neg = (-f).cwiseMax(0.0);
  out.modulus = f.cwiseAbs();
  return out;
}

bool ideal_inclusion_by_truncation(const RealVector& f, const RealVector& g,
                                   double t_max, double p, double tol) {
  require_same_dim(f, g);
  require_finite(f, "f");
  require_finite(g, "g");
  require_nonneg(f, "f");
  require_nonneg(g, "g");
  if (!(t_max > 0.0)) throw InvalidArgument("t_max must be positive");
  if (!(p >= 1.0)) throw InvalidArgument("norm exponent must be >= 1");
  if (tol < 0.0) tol = default_support_threshold(f);
  const RealVector truncated = f.cwiseMin(t_max * g);
  return lp_norm(f - truncated, p) <= tol;
}

LittleOTrace little_o_trace(const RealVector& f, const RealVector& g,
                            std::span<const double> s_grid) {
  require_same_dim(f, g);
  require_finite(f, "f");
  require_finite(g, "g");
  require_nonneg(f, "f");
  require_nonneg(g, "g");
  if (s_grid.empty()) throw InvalidArgument("s_grid is empty");
  for (std::size_t k = 0; k < s_grid.size(); ++k) {
    if (!(s_grid[k] > 0.0)) throw InvalidArgument("s_grid entries must be > 0");
    if (k > 0 && !(s_grid[k] < s_grid[k - 1])) {
      throw InvalidArgument("s_grid must be strictly decreasing");
    }
  }

  LittleOTrace trace;
  trace.ratios.reserve(s_grid.size());
  for (double s : s_grid) {
    const RealVector negative_part = (s * f - g).cwiseMax(0.0);
    trace.ratios.push_back(negative_part.maxCoeff() / s);
  }

  const auto& r = trace.ratios;
  bool tail_monotone = true;
  const std::size_t tail = std::min<std::size_t>(3, r.size());
  for (std::size_t k = r.size() - tail + 1; k < r.size(); ++k) {
    if (r[k] > r[k - 1]) tail_monotone = false;
  }
  trace.included = r.back() <= kLittleOTol && tail_monotone;
  return trace;
}

bool ideal_inclusion_little_o(const RealVector& f, const RealVector& g,
                              std::span<const double> s_grid) {
  return little_o_trace(f, g, s_grid).included;
}

std::vector<double> default_s_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 14; ++k) grid.push_back(std::pow(10.0, -k));
  return grid;
}

}  // namespace posop
