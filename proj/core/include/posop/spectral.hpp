#ifndef POSOP_SPECTRAL_HPP
#define POSOP_SPECTRAL_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "posop/operators.hpp"

namespace posop {

using Complex = std::complex<double>;

inline constexpr double kEigenTol = 1e-8;        // clustering and residual certificates
inline constexpr double kUnimodularTol = 1e-6;   // ||λ| − 1| and |λ − 1| tests
inline constexpr std::size_t kMeanErgodicHorizon = std::size_t{1} << 30;

/// One distinct eigenvalue (a cluster of computed roots).
struct EigenPair {
  Complex value;
  std::size_t multiplicity = 1;
  double residual = 0.0;  // ‖Tv − λv‖₂ for a unit vector v from inverse iteration
};

struct Spectrum {
  std::vector<EigenPair> eigenvalues;  // by descending modulus, then argument
  std::vector<Complex> raw;            // all dim computed roots
  double spr = 0.0;
  double tol = kEigenTol;
  double norm_inf = 0.0;  // ‖T‖∞ used to scale tolerances

  double cluster_tol() const { return tol * (1.0 + norm_inf); }
  std::size_t total_multiplicity() const;
  /// Distinct values only.
  std::vector<Complex> values() const;
};

/// Eigenvalues of T with inverse-iteration residuals, computed block by
/// block on the irreducible components. Roots closer than tol·(1 + ‖T‖∞)
/// are merged into one eigenvalue with multiplicity.
Spectrum eigenvalues(const Operator& t, double tol = kEigenTol);
Spectrum eigenvalues(const Matrix& m, double tol = kEigenTol);

/// Eigenvalues with ||λ| − 1| ≤ tol.
std::vector<Complex> unimodular_point_spectrum(const Spectrum& s, double tol = kUnimodularTol);

/// Eigenvalues with |λ| ≥ spr − tol.
std::vector<Complex> peripheral_spectrum(const Spectrum& s, double tol = kUnimodularTol);

/// For every r·e^{iθ} in the set, r·e^{inθ} is in the set (within tol) for
/// |n| ≤ size + 1.
bool is_cyclic(const std::vector<Complex>& set, double tol = kUnimodularTol);

/// Every eigenvalue lies in the closed disk of radius spr − ε around ε
/// (within tol). Throws InvalidArgument when ε < 0 or ε > spr.
bool disk_inclusion(const Spectrum& s, double epsilon, double tol = kEigenTol);

/// Complex Schur form T = Z U Z* reordered so that the eigenvalues accepted
/// by `select` come first.
struct OrderedSchur {
  Eigen::MatrixXcd z;
  Eigen::MatrixXcd u;
  std::size_t selected = 0;
};

OrderedSchur ordered_schur(const Matrix& m, const std::function<bool(Complex)>& select);

/// Spectral (Riesz) projection onto the generalized eigenspaces of the
/// selected eigenvalues along the others. The selection must be closed under
/// conjugation; the real part is returned.
Matrix spectral_projection(const Matrix& m, const std::function<bool(Complex)>& select);

/// Rank with singular values above `threshold`.
std::size_t numerical_rank(const Matrix& m, double threshold);

/// dim · machine epsilon · largest row norm.
double rank_tolerance(const Matrix& m);

struct JdlgProjection {
  Matrix p;
  std::size_t reversible_dim = 0;
  bool positive = true;           // p ≥ −1e−8 entrywise
  double idempotence_error = 0.0; // ‖P² − P‖∞
  double commutator_error = 0.0;  // ‖PT − TP‖∞
};

/// Projection onto the span of the eigenvectors for unimodular eigenvalues
/// (|λ| ≥ 1 − tol). Throws PowerUnbounded unless spectrally_power_bounded.
JdlgProjection jdlg_projection(const Operator& t, double tol = kUnimodularTol);

/// Spectral projection for the eigenvalues within tol of 1 (zero if none).
Matrix eigenprojection_at_one(const Matrix& m, double tol = kUnimodularTol);

/// Cesàro means at k_max/2 and k_max; returns the latter when they agree
/// within tol entrywise.
std::optional<Operator> mean_ergodic_projection(const Operator& t,
                                                std::size_t k_max = kMeanErgodicHorizon,
                                                double tol = 1e-6);

enum class ConvergenceClass { ConvergesStrongly, DivergesOrOscillates, Inconclusive };

const char* to_string(ConvergenceClass c);

struct ConvergenceEmpirics {
  std::optional<std::size_t> k_star;  // first k with ‖T^{k+1} − T^k‖∞ ≤ threshold
  double final_residual = 0.0;        // the last ‖T^{k+1} − T^k‖∞ computed
  std::size_t iterations = 0;
};

struct ConvergenceVerdict {
  ConvergenceClass theoretical = ConvergenceClass::Inconclusive;
  ConvergenceEmpirics empirical;
  std::optional<Operator> limit;  // eigenprojection at 1 when converging
  bool one_semisimple = true;
};

struct ConvergenceOptions {
  double tol = kUnimodularTol;
  std::size_t k_max = 5000;
  double step_threshold = 1e-6;
  /// Iteration cap for operators classified as diverging; their empirics
  /// only illustrate the oscillation.
  std::size_t divergent_k_cap = 200;
};

/// Is eigenvalue 1 semisimple? Compares rank(N) and rank(N²) with
/// N = U11 − I on the Schur block of eigenvalues within tol of 1, using the
/// threshold tol · (1 + ‖T‖∞).
bool eigenvalue_one_semisimple(const Matrix& m, double tol = kUnimodularTol);

/// Power boundedness of a non-negative matrix: spr < 1, or spr = 1 with
/// eigenvalue 1 semisimple. Peripheral eigenvalues of a non-negative matrix
/// never have a larger index than spr, so this is the exact criterion up
/// to the tolerance. Near-1 radii count as 1.
bool spectrally_power_bounded(const Spectrum& s, const Matrix& m, double tol = kUnimodularTol);

ConvergenceVerdict classify_power_convergence(const Spectrum& s, const Operator& t,
                                              const ConvergenceOptions& options = {});

}  // namespace posop

#endif  // POSOP_SPECTRAL_HPP
