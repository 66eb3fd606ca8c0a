#ifndef POSOP_OPERATORS_HPP
#define POSOP_OPERATORS_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "posop/lattice.hpp"

namespace posop {

using Matrix = Eigen::MatrixXd;

enum class SpaceKind { LpGrid, CKGrid, Sequence };

/// The function space a matrix acts on. LpGrid carries quadrature weights
/// (cell measures); CKGrid and Sequence use unit weights.
class SpaceSemantics {
 public:
  static SpaceSemantics lp_grid(RealVector weights, double p,
                                std::vector<double> coordinates = {});
  /// Midpoint grid with m cells on [a, b].
  static SpaceSemantics lp_midpoint(std::size_t m, double a, double b,
                                    double p = 1.0);
  static SpaceSemantics ck_grid(std::vector<double> coordinates);
  /// Equispaced grid on [a, b] including both endpoints.
  static SpaceSemantics ck_uniform(std::size_t m, double a, double b);
  static SpaceSemantics sequence(std::size_t dim, double p = 2.0);

  SpaceKind kind() const noexcept { return kind_; }
  double p() const noexcept { return p_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(weights_.size()); }
  const RealVector& weights() const noexcept { return weights_; }
  const std::vector<double>& coordinates() const noexcept { return coordinates_; }

  SupportSemantics support_semantics() const noexcept {
    return kind_ == SpaceKind::CKGrid ? SupportSemantics::Open
                                      : SupportSemantics::AlmostEverywhere;
  }

  friend bool operator==(const SpaceSemantics& a, const SpaceSemantics& b);

 private:
  SpaceSemantics(SpaceKind kind, double p, RealVector weights,
                 std::vector<double> coordinates);

  SpaceKind kind_;
  double p_;
  RealVector weights_;
  std::vector<double> coordinates_;
};

const char* to_string(SpaceKind kind);

/// Positive linear operator on a finite grid: a square matrix with
/// non-negative entries plus the space it acts on. Immutable.
class Operator {
 public:
  /// Validates squareness, dimension match, finiteness and positivity.
  Operator(Matrix matrix, SpaceSemantics space, std::string label = {});

  const Matrix& matrix() const noexcept { return matrix_; }
  const SpaceSemantics& space() const noexcept { return space_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

  /// Same space and label, different matrix.
  Operator with_matrix(Matrix m, std::string label) const;

 private:
  Matrix matrix_;
  SpaceSemantics space_;
  std::string label_;
};

/// Positive functional. Under LpGrid it acts through the quadrature
/// weights, ⟨α, f⟩ = Σ α_i w_i f_i; otherwise it is a plain dot product.
struct Functional {
  RealVector coefficients;
};

double pair(const Functional& alpha, const RealVector& f,
            const SpaceSemantics& space);

/// Builds an Operator, clipping entries in (−τ, 0) to zero where
/// τ = kDefaultSupportTol · max(1, max|entry|). Throws NegativeEntry for
/// anything more negative and InvalidArgument for non-square input.
Operator from_dense(Matrix rows, SpaceSemantics space, std::string label = {});

/// Midpoint-rule discretization of (Tf)(x) = ∫_a^b k(x, y) f(y) dy:
/// entry (i, j) = h · k(x_i, x_j) with h = (b − a)/m.
Operator kernel_on_grid(const std::function<double(double, double)>& kernel,
                        std::size_t m, double a, double b, double p = 1.0);

/// Σ_j e_j ⊗ α_j.
Operator finite_rank(const std::vector<RealVector>& e_list,
                     const std::vector<Functional>& alpha_list,
                     const SpaceSemantics& space, std::string label = {});

/// Circular truncation of the partition operator Tf = Σ_n ∫_{I_n} f · 1_{J_n}
/// on N blocks of unit length, each split into block_size cells.
/// J_n is the first `overlap` of I_n joined with the last (1 − overlap)
/// of I_{pairing[n]}; when pairing[n] = n this is I_n itself.
Operator partition_operator(std::size_t blocks, std::size_t block_size,
                            const std::vector<std::size_t>& pairing,
                            double overlap);

/// Indicator of block n of a partition operator, as a grid vector.
RealVector partition_block_indicator(std::size_t blocks, std::size_t block_size,
                                     std::size_t n);

std::vector<std::size_t> cyclic_pairing(std::size_t blocks);

ComplexVector apply(const Operator& t, const ComplexVector& f);
RealVector apply(const Operator& t, const RealVector& f);

/// T^n by binary powering; T^0 is the identity.
Operator matrix_power(const Operator& t, std::size_t n);

/// Σ_{k<n} T^k, computed by doubling so that n may be very large.
Matrix power_sum(const Matrix& t, std::size_t n);

/// (1/n) Σ_{k=0}^{n-1} T^k.
Operator cesaro_mean(const Operator& t, std::size_t n);

/// Rows scaled to sum 1 (zero rows are left alone).
Operator normalize_rows(const Operator& t);

/// Sinkhorn scaling D1 T D2 to a doubly stochastic matrix; the final pass
/// normalizes rows so row sums are exact to rounding.
Operator sinkhorn_normalize(const Operator& t, double tol = 1e-13,
                            std::size_t max_iter = 100000);

enum class NormKind { InducedInf, InducedOne, RieszThorin };

const char* to_string(NormKind kind);

struct PowerBound {
  double sup_norm = 0.0;        // in the norm selected by the space
  NormKind norm_used = NormKind::InducedInf;
  double sup_induced_one = 0.0;  // weighted induced-1 envelope
  double sup_induced_inf = 0.0;  // induced-∞ envelope
  double spr_used = 0.0;         // supplied spr, or the Gelfand bound
  bool bounded_guess = false;
  std::vector<double> norms;     // ‖T^n‖ for n = 1..horizon
};

double induced_inf_norm(const Matrix& m);
/// Induced norm on L^1 with the space's weights.
double induced_one_norm(const Matrix& m, const RealVector& weights);

/// Empirical power-boundedness surrogate over n = 1..horizon. A supplied
/// spectral radius above 1 + tol decides "unbounded"; a radius (supplied,
/// or the Gelfand upper bound min_n ‖T^n‖^{1/n}) below 1 − tol decides
/// "bounded". Otherwise bounded_guess holds iff the last quarter of
/// ‖T^0‖, ..., ‖T^horizon‖ stays below the earlier maximum, or its rise is
/// at most half the rise over the quarter before it (polynomial growth
/// keeps its increments, a bounded monotone sequence loses them).
PowerBound power_bound_estimate(const Operator& t, std::size_t horizon,
                                std::optional<double> spr = std::nullopt,
                                double tol = 1e-9);

}  // namespace posop

#endif  // POSOP_OPERATORS_HPP
