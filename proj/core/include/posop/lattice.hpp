#ifndef POSOP_LATTICE_HPP
#define POSOP_LATTICE_HPP

// Vector-lattice primitives on finite grids: supports, the lattice
// operations, and the numerical criteria for inclusion of the closed
// ideals generated by two positive vectors.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace posop {

using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Relative zero-detection threshold used when no explicit one is given:
/// an entry counts as non-zero iff |v_i| > kDefaultSupportTol * max|v|.
inline constexpr double kDefaultSupportTol = 1e-12;

/// Acceptance threshold of the little-o criterion on its last ratio.
inline constexpr double kLittleOTol = 1e-6;

/// How a mask is read: a.e.-support of an L^p function, or open support of
/// a continuous function on a compact grid.
enum class SupportSemantics { AlmostEverywhere, Open };

/// Finite set of grid indices. On atomic spaces this is a faithful model
/// of the closed ideal generated by a positive vector.
class SupportMask {
 public:
  SupportMask(std::size_t dim, std::vector<std::size_t> indices,
              SupportSemantics semantics = SupportSemantics::AlmostEverywhere);

  static SupportMask none(std::size_t dim, SupportSemantics semantics =
                                               SupportSemantics::AlmostEverywhere);
  static SupportMask all(std::size_t dim, SupportSemantics semantics =
                                              SupportSemantics::AlmostEverywhere);

  std::size_t dim() const noexcept { return dim_; }
  SupportSemantics semantics() const noexcept { return semantics_; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  bool contains(std::size_t i) const;

  SupportMask intersect(const SupportMask& other) const;
  SupportMask unite(const SupportMask& other) const;

  friend bool operator==(const SupportMask&, const SupportMask&) = default;

 private:
  std::size_t dim_;
  std::vector<std::size_t> indices_;
  SupportSemantics semantics_;
};

/// {i : |v_i| > tau}. tau is absolute.
SupportMask support(const RealVector& v, double tau,
                    SupportSemantics semantics = SupportSemantics::AlmostEverywhere);
SupportMask support(const ComplexVector& v, double tau,
                    SupportSemantics semantics = SupportSemantics::AlmostEverywhere);

/// Support with the scale-invariant default threshold.
SupportMask support(const RealVector& v);

double default_support_threshold(const RealVector& v);

/// a ⊆ b. Throws DimensionMismatch when dim or semantics differ.
bool mask_subseteq(const SupportMask& a, const SupportMask& b);

struct LatticeParts {
  RealVector inf;      // f ∧ g
  RealVector sup;      // f ∨ g
  RealVector pos;      // f⁺
  RealVector neg;      // f⁻
  RealVector modulus;  // |f|
};

LatticeParts lattice_ops(const RealVector& f, const RealVector& g);

/// Tests lim_{t→∞} f ∧ (t g) = f by evaluating ‖f − f ∧ (t_max g)‖_p.
/// tol < 0 selects the support threshold of f. p may be +infinity.
bool ideal_inclusion_by_truncation(const RealVector& f, const RealVector& g,
                                   double t_max, double p, double tol = -1.0);

struct LittleOTrace {
  std::vector<double> ratios;  // ‖(g − s f)⁻‖_∞ / s along the grid
  bool included = false;
};

/// Tests ‖(g − s f)⁻‖ = o(s) along a strictly decreasing grid of s > 0.
/// Accepts when the last ratio is ≤ kLittleOTol and the last three ratios
/// are non-increasing.
LittleOTrace little_o_trace(const RealVector& f, const RealVector& g,
                            std::span<const double> s_grid);
bool ideal_inclusion_little_o(const RealVector& f, const RealVector& g,
                              std::span<const double> s_grid);

/// 10^0, 10^-1, ..., 10^-14.
std::vector<double> default_s_grid();

}  // namespace posop

#endif  // POSOP_LATTICE_HPP
