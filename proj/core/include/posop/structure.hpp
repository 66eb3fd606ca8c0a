#ifndef POSOP_STRUCTURE_HPP
#define POSOP_STRUCTURE_HPP

// Combinatorial hypothesis checks on positive matrices. Supports of T^n f
// are propagated through the support graph rather than recomputed from
// floating-point powers, so they are exact at the chosen entry threshold.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "posop/lattice.hpp"
#include "posop/operators.hpp"

namespace posop {

/// Entry threshold used when a caller passes tau < 0:
/// kDefaultSupportTol · max_ij T_ij.
double default_entry_threshold(const Matrix& m);

/// Directed graph with an edge j → i iff T_ij > tau.
struct SupportGraph {
  std::size_t dim = 0;
  std::vector<std::vector<std::size_t>> out;  // out[j] = {i : T_ij > tau}
  double tau = 0.0;

  bool has_edge(std::size_t from, std::size_t to) const;
};

SupportGraph support_graph(const Operator& t, double tau = -1.0);

bool is_irreducible(const Operator& t, double tau = -1.0);

/// gcd of the cycle lengths of the support graph. Throws ReducibleOperator
/// when the graph is not strongly connected and InvalidArgument when it has
/// no cycle at all (the 1×1 zero matrix).
std::size_t period(const Operator& t, double tau = -1.0);

/// Smallest n in [1, horizon] with supp(T^n f) ⊇ supp(T^{n-1} f).
std::optional<std::size_t> expands_support(const Operator& t, const RealVector& f,
                                           std::size_t horizon, double tau = -1.0);

struct BasisExpansion {
  std::size_t index = 0;
  std::optional<std::size_t> first_n;
};

struct ExpansionResult {
  std::vector<BasisExpansion> per_basis_vector;
  bool all_satisfied = false;
  std::size_t horizon = 0;
  std::size_t samples = 0;
  std::size_t failed_samples = 0;

  /// Basis indices whose expansion index was not found.
  std::vector<std::size_t> witnesses() const;
  /// max first_n over the basis; absent unless every basis vector expands.
  std::optional<std::size_t> max_first_n() const;
};

/// Runs expands_support on every canonical basis vector and on `samples`
/// seeded random non-negative vectors.
ExpansionResult expands_support_everywhere(const Operator& t, std::size_t horizon,
                                           std::size_t samples, std::uint64_t seed,
                                           double tau = -1.0);

/// supp(Tf) ⊇ supp(f) for every f supported in S; on a grid this is T_ii > tau
/// for each i in S. Throws InvalidArgument on an empty S.
bool expands_support_on_band(const Operator& t, const SupportMask& band,
                             double tau = -1.0);

/// At most one entry > tau per row, cross-checked by T(f ∨ g) = Tf ∨ Tg on
/// 20 seeded random pairs.
bool is_lattice_homomorphism(const Operator& t, double tau = -1.0,
                             std::uint64_t seed = 0);

/// Largest ε with T ≥ ε·I, i.e. min_i T_ii.
double dominates_identity(const Operator& t);

struct DominationResult {
  std::size_t n = 1;
  double epsilon_max = 0.0;  // +infinity when T^{n-1} = 0
  std::optional<std::pair<std::size_t, std::size_t>> witness_entry;
};

/// Largest ε with T^n ≥ ε T^{n-1}: the minimum of (T^n)_ij / (T^{n-1})_ij
/// over entries where T^{n-1} is non-zero.
DominationResult power_domination(const Operator& t, std::size_t n, double tau = -1.0);

struct SuperFixed {
  bool super_fixed = false;  // Tf ≥ f − tau
  bool fixed = false;        // ‖Tf − f‖_∞ ≤ tau ‖f‖_∞
};

SuperFixed is_super_fixed(const Operator& t, const RealVector& f, double tau = 1e-12);

}  // namespace posop

#endif  // POSOP_STRUCTURE_HPP
