#ifndef POSOP_EIGENSOLVER_HPP
#define POSOP_EIGENSOLVER_HPP

// Dense nonsymmetric eigenvalue solver: radix-2 balancing, Householder
// reduction to upper Hessenberg form, and the Francis double-shift QR
// iteration with exceptional shifts.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace posop {

/// Diagonal similarity scaling by powers of two; returns the scale vector d
/// with a ← D⁻¹ a D. Rounding-free, so eigenvalues are unchanged.
Eigen::VectorXd balance(Eigen::MatrixXd& a);

/// In-place reduction to upper Hessenberg form by Householder reflections.
/// Entries below the first subdiagonal are set to zero.
void reduce_to_hessenberg(Eigen::MatrixXd& a);

/// Eigenvalues of an upper Hessenberg matrix (destroyed). Complex pairs are
/// returned as exact conjugates. Throws SolverFailure after 30·dim sweeps,
/// carrying the eigenvalues that had deflated.
std::vector<std::complex<double>> hessenberg_qr_eigenvalues(Eigen::MatrixXd& h);

/// balance + reduce_to_hessenberg + hessenberg_qr_eigenvalues.
std::vector<std::complex<double>> dense_eigenvalues(const Eigen::MatrixXd& a);

/// Strongly connected components of the exact non-zero pattern (edge
/// j → i iff a(i, j) ≠ 0), in a topological order of the condensation.
/// Permuting a by this order makes it block triangular.
std::vector<std::vector<std::size_t>> irreducible_blocks(const Eigen::MatrixXd& a);

/// Eigenvalues as the union of the eigenvalues of the diagonal blocks of
/// the block-triangular form. Singleton blocks contribute their diagonal
/// entry exactly, so nilpotent chains and couplings between blocks cannot
/// split a repeated eigenvalue. A SolverFailure carries the eigenvalues of
/// all blocks finished so far.
std::vector<std::complex<double>> block_eigenvalues(const Eigen::MatrixXd& a);

}  // namespace posop

#endif  // POSOP_EIGENSOLVER_HPP
