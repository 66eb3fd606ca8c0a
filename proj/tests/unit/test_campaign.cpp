#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "posop/campaign.hpp"
#include "posop/errors.hpp"
#include "posop/structure.hpp"

using namespace posop;
using nlohmann::json;

TEST_CASE("splitmix64 reference values") {
  // First two outputs of the reference generator with state 0.
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64(0x9E3779B97F4A7C15ULL) == 0x6E789E6AA1B965F4ULL);
}

TEST_CASE("generator names round-trip") {
  for (auto kind : {GeneratorKind::StochasticPositiveDiag, GeneratorKind::IrreducibleOneDiag,
                    GeneratorKind::DominatesId, GeneratorKind::PowerDomination,
                    GeneratorKind::Unconstrained}) {
    CHECK(generator_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(generator_from_string("Gaussian"), InvalidArgument);
}

TEST_CASE("random_stochastic_positive_diag") {
  std::mt19937_64 rng(301);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t dim = 1 + rng() % 12;
    const Matrix m = random_stochastic_positive_diag(dim, rng);
    CHECK(m.minCoeff() >= 0.0);
    CHECK(m.diagonal().minCoeff() > 0.0);
    CHECK(m.rowwise().sum().maxCoeff() <= 1.0 + 1e-12);
    CHECK(std::abs(m.rowwise().sum().maxCoeff() - 1.0) <= 1e-12);
    double spr = 0.0;
    for (auto z : oracle::eigen_eigenvalues(m)) spr = std::max(spr, std::abs(z));
    CHECK(spr == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("random_irreducible_one_diag") {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t dim = 1 + rng() % 10;
    const Matrix m = random_irreducible_one_diag(dim, rng);
    CHECK((m.diagonal().array() > 0.0).count() == 1);
    CHECK((m.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
    CHECK(oracle::strongly_connected(m));
  }
}

TEST_CASE("random_irreducible_stochastic has a strictly positive stationary vector") {
  std::mt19937_64 rng(305);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + rng() % 10;
    const Matrix m = random_irreducible_stochastic(dim, rng);
    CHECK(oracle::strongly_connected(m));
    CHECK((m.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
    Eigen::EigenSolver<Matrix> es(m.transpose());
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i)
      if (std::abs(es.eigenvalues()[i] - 1.0) < std::abs(es.eigenvalues()[best] - 1.0)) best = i;
    Eigen::VectorXd pi = es.eigenvectors().col(best).real();
    pi /= pi.sum();
    CHECK(pi.minCoeff() > 0.0);
  }
}

TEST_CASE("random_dominates_identity") {
  std::mt19937_64 rng(307);
  for (double eps : {0.1, 0.3, 0.5, 1.0}) {
    const Matrix m = random_dominates_identity(6, eps, rng);
    CHECK(m.diagonal().minCoeff() >= eps - 1e-15);
    CHECK((m.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
  }
  CHECK_THROWS_AS(random_dominates_identity(3, 0.0, rng), InvalidArgument);
  CHECK_THROWS_AS(random_dominates_identity(3, 1.5, rng), InvalidArgument);
}

TEST_CASE("random_irreducible_pattern") {
  std::mt19937_64 rng(309);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 1 + rng() % 7;
    const Matrix p = random_irreducible_pattern(dim, 0.2, rng);
    CHECK(oracle::strongly_connected(p));
    CHECK(((p.array() == 0.0) || (p.array() == 1.0)).all());
  }
}

TEST_CASE("generate_instance is reproducible and labelled") {
  GeneratorSpec spec;
  const auto a = generate_instance(spec, 6, 12345);
  const auto b = generate_instance(spec, 6, 12345);
  CHECK(a.matrix() == b.matrix());
  CHECK(a.label() == "StochasticPositiveDiag#12345");
  CHECK(generate_instance(spec, 6, 12346).matrix() != a.matrix());

  spec.kind = GeneratorKind::PowerDomination;
  spec.n = 2;
  const auto p = generate_instance(spec, 3, 9);
  CHECK(p.dim() >= 4);
  CHECK(p.dim() <= 30);
  CHECK(std::abs(power_domination(p, 2).epsilon_max - spec.epsilon) <= 1e-12);
}

TEST_CASE("campaign validation") {
  CampaignConfig c;
  c.count = 0;
  CHECK_THROWS_AS(run_campaign(c), InvalidArgument);
  c.count = 3;
  c.dim_min = 0;
  CHECK_THROWS_AS(run_campaign(c), InvalidArgument);
  c.dim_min = 5;
  c.dim_max = 4;
  CHECK_THROWS_AS(run_campaign(c), InvalidArgument);
}

TEST_CASE("campaigns are sound for every generator") {
  for (auto kind : {GeneratorKind::StochasticPositiveDiag, GeneratorKind::IrreducibleOneDiag,
                    GeneratorKind::DominatesId, GeneratorKind::PowerDomination,
                    GeneratorKind::Unconstrained}) {
    CampaignConfig c;
    c.count = 150;
    c.dim_max = 10;
    c.seed = 7;
    c.generator.kind = kind;
    const auto s = run_campaign(c);
    CHECK(s.instances == 150);
    CHECK(s.violations.empty());
    CHECK(s.solver_failures == 0);
    CHECK(s.max_residual <= 1e-8);
    if (kind != GeneratorKind::Unconstrained) {
      CHECK(s.hypothesis_pass_count == s.instances);
      CHECK(s.unimodular_other_than_one == 0);
    }
  }
}

TEST_CASE("DominatesId campaigns show disk inclusion") {
  for (double eps : {0.1, 0.3, 0.5}) {
    CampaignConfig c;
    c.count = 100;
    c.dim_max = 12;
    c.seed = 11;
    c.generator.kind = GeneratorKind::DominatesId;
    c.generator.epsilon = eps;
    const auto s = run_campaign(c);
    CHECK(s.disk_inclusion_failures == 0);
    CHECK(s.peripheral_not_spr == 0);
    CHECK(s.violations.empty());
  }
}

TEST_CASE("campaign results do not depend on the number of jobs") {
  CampaignConfig c;
  c.count = 60;
  c.seed = 5;
  c.generator.kind = GeneratorKind::Unconstrained;
  const json one = campaign_summary_to_json(run_campaign(c), c);
  c.jobs = 4;
  const json four = campaign_summary_to_json(run_campaign(c), c);
  CHECK(one.dump() == four.dump());
}

TEST_CASE("adjacent campaign seeds draw different instances") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t base = 1; base <= 3; ++base)
    for (std::uint64_t i = 0; i < 100; ++i)
      seen.insert(splitmix64(splitmix64(base) + i));
  CHECK(seen.size() == 300);
}

TEST_CASE("campaign summary JSON") {
  CampaignConfig c;
  c.count = 5;
  c.seed = 42;
  const json j = campaign_summary_to_json(run_campaign(c), c);
  CHECK(j["generator"]["kind"] == "StochasticPositiveDiag");
  CHECK(j["seed"] == 42);
  CHECK(j["instances"] == 5);
  CHECK(j["violations"].is_array());
  CHECK(j["violations"].empty());
  CHECK(j["hypothesis_pass_count"] == 5);
  CHECK(j["observations"].contains("unimodular_other_than_one"));
}
