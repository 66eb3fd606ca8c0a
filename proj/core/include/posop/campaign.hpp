#ifndef POSOP_CAMPAIGN_HPP
#define POSOP_CAMPAIGN_HPP

// Seeded random operator families and the campaign runner that feeds them
// through the theorem engines.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "posop/operators.hpp"
#include "posop/verdicts.hpp"

namespace posop {

enum class GeneratorKind {
  StochasticPositiveDiag,
  IrreducibleOneDiag,
  DominatesId,
  PowerDomination,
  Unconstrained,
};

const char* to_string(GeneratorKind kind);
GeneratorKind generator_from_string(const std::string& name);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::StochasticPositiveDiag;
  double epsilon = 0.3;  // DominatesId, PowerDomination
  std::size_t n = 2;     // PowerDomination
};

std::uint64_t splitmix64(std::uint64_t x);

/// Row-substochastic, strictly positive diagonal, spr = 1: a closed
/// stochastic class plus transient rows with row sums in [0.5, 0.99].
Matrix random_stochastic_positive_diag(std::size_t dim, std::mt19937_64& rng);

/// Irreducible row-stochastic matrix with exactly one positive diagonal
/// entry: a random Hamiltonian cycle, random chords, one self-loop.
Matrix random_irreducible_one_diag(std::size_t dim, std::mt19937_64& rng);

/// Random row-stochastic matrix; with probability 0.3 a permutation.
Matrix random_stochastic(std::size_t dim, std::mt19937_64& rng);

/// εI + (1 − ε)S with S random stochastic.
Matrix random_dominates_identity(std::size_t dim, double epsilon, std::mt19937_64& rng);

/// Row-stochastic matrix with strictly positive stationary vector
/// (irreducible: random cycle plus chords, arbitrary diagonal).
Matrix random_irreducible_stochastic(std::size_t dim, std::mt19937_64& rng);

/// Random irreducible digraph adjacency pattern (0/1 matrix).
Matrix random_irreducible_pattern(std::size_t dim, double chord_probability,
                                  std::mt19937_64& rng);

/// One campaign instance. PowerDomination with n ≥ 2 ignores `dim` and
/// draws a partition operator with 2..6 blocks of 2..5 cells.
Operator generate_instance(const GeneratorSpec& spec, std::size_t dim, std::uint64_t seed);

struct CampaignConfig {
  std::size_t count = 100;
  std::size_t dim_min = 1;
  std::size_t dim_max = 8;
  GeneratorSpec generator;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  EngineOptions engine;
};

struct CampaignViolation {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string theorem_id;
  nlohmann::json verdict;
  nlohmann::json op;  // reproduction case
};

struct CampaignSummary {
  std::size_t instances = 0;
  std::size_t hypothesis_pass_count = 0;  // primary engine hypotheses held
  std::size_t unimodular_other_than_one = 0;
  std::size_t peripheral_not_spr = 0;
  std::size_t disk_inclusion_failures = 0;
  std::size_t solver_failures = 0;
  double max_residual = 0.0;
  std::vector<CampaignViolation> violations;
};

/// Instance i uses seed splitmix64(splitmix64(config.seed) + i); results are
/// aggregated in instance order regardless of `jobs`.
CampaignSummary run_campaign(const CampaignConfig& config);

nlohmann::json campaign_summary_to_json(const CampaignSummary& s, const CampaignConfig& c);

}  // namespace posop

#endif  // POSOP_CAMPAIGN_HPP
