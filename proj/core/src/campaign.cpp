#include "posop/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "posop/errors.hpp"
#include "posop/matrix_io.hpp"
#include "posop/spectral.hpp"
#include "posop/structure.hpp"

namespace posop {

namespace {

using nlohmann::json;

double uniform(std::mt19937_64& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<std::size_t> shuffled(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

void scale_row(Matrix& m, Eigen::Index i, double target) {
  const double s = m.row(i).sum();
  if (s > 0.0) m.row(i) *= target / s;
}

void weight_pattern(Matrix& m, std::mt19937_64& rng, double lo) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) m(i, j) = uniform(rng, lo, 1.0);
    }
  }
}

struct InstanceResult {
  bool hypotheses = false;
  bool unimodular_other = false;
  bool peripheral_not_spr = false;
  bool disk_failure = false;
  bool solver_failure = false;
  double residual = 0.0;
  std::vector<CampaignViolation> violations;
};

InstanceResult run_instance(const CampaignConfig& config, std::size_t index) {
  InstanceResult res;
  const std::uint64_t seed = splitmix64(splitmix64(config.seed) + index);
  const std::size_t span = config.dim_max - config.dim_min + 1;
  const std::size_t dim = config.dim_min + static_cast<std::size_t>(seed % span);
  const GeneratorSpec& spec = config.generator;
  const Operator t = generate_instance(spec, dim, seed);

  EngineOptions options = config.engine;
  options.seed = seed;
  EngineContext ctx(t, options);
  try {
    const Spectrum& s = ctx.spectrum();
    for (const auto& e : s.eigenvalues) {
      res.residual = std::max(res.residual, e.residual / (1.0 + s.norm_inf));
      const bool unimodular = std::abs(std::abs(e.value) - 1.0) <= options.tol;
      if (unimodular && std::abs(e.value - 1.0) > options.tol) res.unimodular_other = true;
    }
    const double scaled = options.tol * std::max(1.0, s.spr);
    for (Complex z : peripheral_spectrum(s, scaled)) {
      if (std::abs(z - s.spr) > scaled) res.peripheral_not_spr = true;
    }

    std::vector<TheoremVerdict> verdicts;
    switch (spec.kind) {
      case GeneratorKind::StochasticPositiveDiag:
        verdicts.push_back(engine_main_everywhere(ctx));
        verdicts.push_back(engine_convergence(ctx, ConvergenceVariant::Everywhere));
        break;
      case GeneratorKind::IrreducibleOneDiag:
        verdicts.push_back(engine_main_irreducible(ctx));
        verdicts.push_back(engine_convergence(ctx, ConvergenceVariant::Irreducible));
        break;
      case GeneratorKind::DominatesId:
        verdicts.push_back(engine_dominates_identity(ctx));
        verdicts.push_back(engine_power_domination(ctx, 1));
        res.disk_failure = !disk_inclusion(s, std::min(spec.epsilon, s.spr), kEigenTol);
        break;
      case GeneratorKind::PowerDomination:
        verdicts.push_back(engine_power_domination(ctx, std::max<std::size_t>(1, spec.n)));
        verdicts.push_back(engine_convergence(ctx, ConvergenceVariant::CesaroABLV));
        break;
      case GeneratorKind::Unconstrained:
        verdicts.push_back(engine_main_everywhere(ctx));
        verdicts.push_back(engine_lattice_homomorphism(ctx));
        verdicts.push_back(engine_dominates_identity(ctx));
        verdicts.push_back(engine_power_domination(ctx, 2));
        verdicts.push_back(engine_main_irreducible(ctx));
        break;
    }
    res.hypotheses = verdicts.front().report.all_passed();
    for (const auto& v : verdicts) {
      if (v.consistent()) continue;
      CampaignViolation viol;
      viol.index = index;
      viol.seed = seed;
      viol.theorem_id = to_string(v.report.theorem_id);
      viol.verdict = verdict_to_json(v);
      viol.op = operator_to_json(t);
      res.violations.push_back(std::move(viol));
    }
  } catch (const SolverFailure&) {
    res.solver_failure = true;
  }
  return res;
}

}  // namespace

const char* to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::StochasticPositiveDiag: return "StochasticPositiveDiag";
    case GeneratorKind::IrreducibleOneDiag: return "IrreducibleOneDiag";
    case GeneratorKind::DominatesId: return "DominatesId";
    case GeneratorKind::PowerDomination: return "PowerDomination";
    case GeneratorKind::Unconstrained: return "Unconstrained";
  }
  return "?";
}

GeneratorKind generator_from_string(const std::string& name) {
  for (auto k : {GeneratorKind::StochasticPositiveDiag, GeneratorKind::IrreducibleOneDiag,
                 GeneratorKind::DominatesId, GeneratorKind::PowerDomination,
                 GeneratorKind::Unconstrained}) {
    if (name == to_string(k)) return k;
  }
  throw InvalidArgument("unknown generator \"" + name + "\"");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Matrix random_stochastic_positive_diag(std::size_t dim, std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  const std::size_t closed = pick(rng, 1, dim);
  const auto order = shuffled(dim, rng);
  std::vector<bool> in_class(dim, false);
  for (std::size_t k = 0; k < closed; ++k) in_class[order[k]] = true;

  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool row_closed = in_class[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
      if (row_closed && !in_class[static_cast<std::size_t>(j)]) continue;
      if (i == j || coin(rng, 0.5)) m(i, j) = uniform(rng, 0.05, 1.0);
    }
    scale_row(m, i, row_closed ? 1.0 : uniform(rng, 0.5, 0.99));
  }
  return m;
}

Matrix random_irreducible_pattern(std::size_t dim, double chord_probability,
                                  std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix m = Matrix::Zero(n, n);
  if (dim == 1) {
    m(0, 0) = 1.0;
    return m;
  }
  const auto cycle = shuffled(dim, rng);
  for (std::size_t k = 0; k < dim; ++k) {
    const auto from = static_cast<Eigen::Index>(cycle[k]);
    const auto to = static_cast<Eigen::Index>(cycle[(k + 1) % dim]);
    m(to, from) = 1.0;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && coin(rng, chord_probability)) m(i, j) = 1.0;
    }
  }
  return m;
}

Matrix random_irreducible_one_diag(std::size_t dim, std::mt19937_64& rng) {
  Matrix m = random_irreducible_pattern(dim, 0.3, rng);
  const auto k = static_cast<Eigen::Index>(pick(rng, 0, dim - 1));
  m(k, k) = 1.0;
  weight_pattern(m, rng, 0.1);
  for (Eigen::Index i = 0; i < m.rows(); ++i) scale_row(m, i, 1.0);
  return m;
}

Matrix random_irreducible_stochastic(std::size_t dim, std::mt19937_64& rng) {
  Matrix m = random_irreducible_pattern(dim, 0.3, rng);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (coin(rng, 0.3)) m(i, i) = 1.0;
  }
  weight_pattern(m, rng, 0.05);
  for (Eigen::Index i = 0; i < m.rows(); ++i) scale_row(m, i, 1.0);
  return m;
}

Matrix random_stochastic(std::size_t dim, std::mt19937_64& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix m = Matrix::Zero(n, n);
  if (coin(rng, 0.3)) {
    const auto perm = shuffled(dim, rng);
    for (std::size_t i = 0; i < dim; ++i) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(perm[i])) = 1.0;
    }
    return m;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (coin(rng, 0.6)) m(i, j) = uniform(rng, 0.05, 1.0);
    }
    if (m.row(i).sum() == 0.0) {
      m(i, static_cast<Eigen::Index>(pick(rng, 0, dim - 1))) = uniform(rng, 0.05, 1.0);
    }
    scale_row(m, i, 1.0);
  }
  return m;
}

Matrix random_dominates_identity(std::size_t dim, double epsilon, std::mt19937_64& rng) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in (0, 1]");
  const auto n = static_cast<Eigen::Index>(dim);
  return epsilon * Matrix::Identity(n, n) + (1.0 - epsilon) * random_stochastic(dim, rng);
}

Operator generate_instance(const GeneratorSpec& spec, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw InvalidArgument("instance dimension must be >= 1");
  std::mt19937_64 rng(seed);
  const std::string label = std::string(to_string(spec.kind)) + "#" + std::to_string(seed);
  auto wrap = [&](Matrix m) {
    const auto d = static_cast<std::size_t>(m.rows());
    return Operator(std::move(m), SpaceSemantics::sequence(d, 2.0), label);
  };
  switch (spec.kind) {
    case GeneratorKind::StochasticPositiveDiag:
      return wrap(random_stochastic_positive_diag(dim, rng));
    case GeneratorKind::IrreducibleOneDiag:
      return wrap(random_irreducible_one_diag(dim, rng));
    case GeneratorKind::DominatesId:
      return wrap(random_dominates_identity(dim, spec.epsilon, rng));
    case GeneratorKind::PowerDomination: {
      if (spec.n <= 1) return wrap(random_dominates_identity(dim, spec.epsilon, rng));
      const std::size_t blocks = pick(rng, 2, 6);
      const std::size_t cells = pick(rng, 2, 5);
      const auto pairing = shuffled(blocks, rng);
      const Operator p = partition_operator(blocks, cells, pairing, spec.epsilon);
      return p.with_matrix(p.matrix(), label);
    }
    case GeneratorKind::Unconstrained: {
      const auto n = static_cast<Eigen::Index>(dim);
      Matrix m = Matrix::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          if (coin(rng, 0.5)) m(i, j) = uniform(rng, 0.05, 1.0);
        }
      }
      const double rows = induced_inf_norm(m);
      if (rows > 0.0 && coin(rng, 0.5)) m /= rows;
      return wrap(std::move(m));
    }
  }
  throw InvalidArgument("unknown generator");
}

CampaignSummary run_campaign(const CampaignConfig& config) {
  if (config.count == 0) throw InvalidArgument("campaign count must be >= 1");
  if (config.dim_min == 0 || config.dim_max < config.dim_min) {
    throw InvalidArgument("campaign needs 1 <= dim_min <= dim_max");
  }
  std::vector<InstanceResult> results(config.count);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < config.count; i = next++) {
      results[i] = run_instance(config, i);
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(config.jobs, 1, config.count);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  CampaignSummary s;
  s.instances = config.count;
  for (auto& r : results) {
    s.hypothesis_pass_count += r.hypotheses ? 1 : 0;
    s.unimodular_other_than_one += r.unimodular_other ? 1 : 0;
    s.peripheral_not_spr += r.peripheral_not_spr ? 1 : 0;
    s.disk_inclusion_failures += r.disk_failure ? 1 : 0;
    s.solver_failures += r.solver_failure ? 1 : 0;
    s.max_residual = std::max(s.max_residual, r.residual);
    for (auto& v : r.violations) s.violations.push_back(std::move(v));
  }
  return s;
}

json campaign_summary_to_json(const CampaignSummary& s, const CampaignConfig& c) {
  json violations = json::array();
  for (const auto& v : s.violations) {
    violations.push_back(json{{"index", v.index},
                              {"seed", v.seed},
                              {"theorem_id", v.theorem_id},
                              {"verdict", v.verdict}});
  }
  return json{
      {"generator", json{{"kind", to_string(c.generator.kind)},
                         {"epsilon", c.generator.epsilon},
                         {"n", c.generator.n}}},
      {"seed", c.seed},
      {"dim_min", c.dim_min},
      {"dim_max", c.dim_max},
      {"instances", s.instances},
      {"hypothesis_pass_count", s.hypothesis_pass_count},
      {"observations", json{{"unimodular_other_than_one", s.unimodular_other_than_one},
                            {"peripheral_not_spr", s.peripheral_not_spr},
                            {"disk_inclusion_failures", s.disk_inclusion_failures},
                            {"solver_failures", s.solver_failures},
                            {"max_relative_residual", s.max_residual}}},
      {"violations", std::move(violations)},
  };
}

}  // namespace posop
