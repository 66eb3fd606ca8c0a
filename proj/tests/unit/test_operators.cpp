#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "posop/errors.hpp"
#include "posop/operators.hpp"
#include "posop/structure.hpp"

using namespace posop;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

Operator seq(const Matrix& m) {
  return from_dense(m, SpaceSemantics::sequence(static_cast<std::size_t>(m.rows())));
}

}  // namespace

TEST_CASE("SpaceSemantics validation") {
  CHECK_THROWS_AS(SpaceSemantics::sequence(0), InvalidArgument);
  CHECK_THROWS_AS(SpaceSemantics::sequence(3, 0.5), InvalidArgument);
  CHECK_THROWS_AS(SpaceSemantics::lp_grid(RealVector::Constant(2, -1.0), 1.0), InvalidArgument);
  CHECK_THROWS_AS(SpaceSemantics::ck_grid({0.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(SpaceSemantics::lp_grid(RealVector::Ones(2), 1.0, {0.0}), DimensionMismatch);
  CHECK_THROWS_AS(SpaceSemantics::lp_midpoint(4, 1.0, 0.0), InvalidArgument);

  const auto mid = SpaceSemantics::lp_midpoint(4, 0.0, 1.0);
  CHECK(mid.kind() == SpaceKind::LpGrid);
  CHECK(mid.weights().sum() == doctest::Approx(1.0));
  CHECK(mid.coordinates().front() == doctest::Approx(0.125));

  const auto ck = SpaceSemantics::ck_uniform(5, -1.0, 1.0);
  CHECK(ck.coordinates() == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  CHECK(ck.support_semantics() == SupportSemantics::Open);
  CHECK(mid.support_semantics() == SupportSemantics::AlmostEverywhere);
}

TEST_CASE("from_dense accepts positive matrices") {
  const auto id = seq(Matrix::Identity(2, 2));
  CHECK(id.dim() == 2);
  CHECK(dominates_identity(id) == 1.0);
  const auto swap = seq(mat({{0, 1}, {1, 0}}));
  CHECK(swap.matrix()(0, 1) == 1.0);
}

TEST_CASE("from_dense rejects negative entries with their position") {
  try {
    seq(mat({{1, -0.5}, {0, 1}}));
    FAIL("expected NegativeEntry");
  } catch (const NegativeEntry& e) {
    CHECK(e.row() == 0);
    CHECK(e.col() == 1);
    CHECK(e.value() == -0.5);
    CHECK(std::string(e.what()).find("NegativeEntry at (0,1)") == 0);
  }
}

TEST_CASE("from_dense clips rounding noise and rejects bad shapes") {
  const auto t = seq(mat({{1, -1e-15}, {0, 1}}));
  CHECK(t.matrix()(0, 1) == 0.0);
  CHECK_THROWS_AS(from_dense(Matrix::Ones(2, 3), SpaceSemantics::sequence(2)), InvalidArgument);
  CHECK_THROWS_AS(from_dense(Matrix::Ones(2, 2), SpaceSemantics::sequence(3)), DimensionMismatch);
  Matrix nan = Matrix::Ones(2, 2);
  nan(1, 1) = NAN;
  CHECK_THROWS_AS(seq(nan), InvalidArgument);
}

TEST_CASE("Operator constructor enforces positivity directly") {
  CHECK_THROWS_AS(Operator(mat({{0, -1e-15}, {0, 0}}), SpaceSemantics::sequence(2)),
                  NegativeEntry);
}

TEST_CASE("kernel_on_grid uses the midpoint rule") {
  const auto ones = kernel_on_grid([](double, double) { return 1.0; }, 4, 0.0, 1.0);
  CHECK((ones.matrix().array() == 0.25).all());
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(ones.matrix().row(i).sum() == doctest::Approx(1.0));

  const std::size_t m = 100;
  const auto lower = kernel_on_grid([](double x, double y) { return x >= y ? 2.0 : 0.0; }, m,
                                    0.0, 1.0);
  const auto& xs = lower.space().coordinates();
  for (std::size_t i = 0; i < m; ++i) {
    // Exact integral ∫₀ˣ 2 dy = 2x; the midpoint sum counts the diagonal cell fully.
    const double row = lower.matrix().row(static_cast<Eigen::Index>(i)).sum();
    CHECK(std::abs(row - 2.0 * xs[i]) <= 1.0 / static_cast<double>(m) + 1e-12);
  }
}

TEST_CASE("row-normalized strip kernel is banded stochastic") {
  const double delta = 0.2;
  const auto strip = kernel_on_grid(
      [&](double x, double y) { return std::abs(x - y) < delta ? 1.0 : 0.0; }, 50, 0.0, 1.0);
  const auto t = normalize_rows(strip);
  for (Eigen::Index i = 0; i < 50; ++i) {
    CHECK(std::abs(t.matrix().row(i).sum() - 1.0) <= 1e-9);
    for (Eigen::Index j = 0; j < 50; ++j) {
      if (std::abs(i - j) > 10) CHECK(t.matrix()(i, j) == 0.0);
    }
  }
  CHECK_THROWS_AS(kernel_on_grid([](double, double) { return -1.0; }, 3, 0.0, 1.0),
                  NegativeEntry);
}

TEST_CASE("finite_rank builds sums of rank-one terms") {
  const auto t = finite_rank({RealVector::Ones(2)}, {Functional{RealVector::Constant(2, 0.5)}},
                             SpaceSemantics::sequence(2));
  CHECK(t.matrix().isApprox(Matrix::Constant(2, 2, 0.5)));

  // Two terms with <α_j, e> = 1 and <α_j, e_j> > 0 fix e = e_1 + e_2.
  RealVector e1(2), e2(2);
  e1 << 1.0, 0.5;
  e2 << 0.0, 0.5;
  RealVector a1(2), a2(2);
  a1 << 0.5, 0.5;  // <a1, e> = 1, <a1, e1> = 0.75
  a2 << 0.2, 0.8;  // <a2, e> = 1, <a2, e2> = 0.4
  const auto nagler = finite_rank({e1, e2}, {Functional{a1}, Functional{a2}},
                                  SpaceSemantics::sequence(2));
  const RealVector e = e1 + e2;
  CHECK((apply(nagler, e) - e).cwiseAbs().maxCoeff() <= 1e-15);

  CHECK_THROWS_AS(finite_rank({}, {}, SpaceSemantics::sequence(2)), InvalidArgument);
  CHECK_THROWS_AS(finite_rank({e1}, {}, SpaceSemantics::sequence(2)), DimensionMismatch);
  CHECK_THROWS_AS(finite_rank({-e1}, {Functional{a1}}, SpaceSemantics::sequence(2)),
                  InvalidArgument);
}

TEST_CASE("functionals act through quadrature weights on Lp grids") {
  const auto lp = SpaceSemantics::lp_midpoint(4, 0.0, 1.0);
  const Functional integral{RealVector::Ones(4)};
  CHECK(pair(integral, RealVector::Ones(4), lp) == doctest::Approx(1.0));
  CHECK(pair(integral, RealVector::Ones(4), SpaceSemantics::sequence(4)) == 4.0);
  CHECK_THROWS_AS(pair(integral, RealVector::Ones(3), lp), DimensionMismatch);
}

TEST_CASE("partition operator shifts blocks when the overlap is 0") {
  const std::size_t n_blocks = 6, b = 5;
  const auto t = partition_operator(n_blocks, b, cyclic_pairing(n_blocks), 0.0);
  RealVector f = partition_block_indicator(n_blocks, b, 0);
  for (std::size_t k = 1; k <= 2 * n_blocks; ++k) {
    f = apply(t, f);
    CHECK(f == partition_block_indicator(n_blocks, b, k % n_blocks));
  }
}

TEST_CASE("partition operator with full overlap is the block-averaging projection") {
  std::vector<std::size_t> identity{0, 1, 2, 3};
  const auto t = partition_operator(4, 3, identity, 1.0);
  const Matrix sq = t.matrix() * t.matrix();
  CHECK((sq - t.matrix()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("partition operator with overlap eps has power domination eps") {
  for (double eps : {0.2, 0.4, 0.5, 0.8}) {
    const auto t = partition_operator(6, 5, cyclic_pairing(6), eps);
    CHECK(std::abs(oracle::ratio_domination(t.matrix(), 2) - eps) <= 1e-12);
    CHECK(std::abs(power_domination(t, 2).epsilon_max - eps) <= 1e-12);
  }
}

TEST_CASE("partition operator validation") {
  CHECK_THROWS_AS(partition_operator(1, 3, {0}, 0.0), InvalidArgument);
  CHECK_THROWS_AS(partition_operator(3, 3, {0, 0, 1}, 0.0), InvalidArgument);
  CHECK_THROWS_AS(partition_operator(3, 3, {0, 1}, 0.0), InvalidArgument);
  CHECK_THROWS_AS(partition_operator(3, 3, cyclic_pairing(3), 1.5), InvalidArgument);
  CHECK_THROWS_AS(partition_operator(3, 1, cyclic_pairing(3), 0.5), InvalidArgument);
  CHECK_THROWS_AS(partition_block_indicator(3, 2, 3), InvalidArgument);
}

TEST_CASE("apply and matrix_power") {
  const auto id = seq(Matrix::Identity(3, 3));
  RealVector f(3);
  f << 1, 2, 3;
  CHECK(apply(id, f) == f);
  CHECK_THROWS_AS(apply(id, RealVector(RealVector::Ones(2))), DimensionMismatch);

  const auto swap = seq(mat({{0, 1}, {1, 0}}));
  CHECK(matrix_power(swap, 2).matrix() == Matrix::Identity(2, 2));
  CHECK(matrix_power(swap, 0).matrix() == Matrix::Identity(2, 2));

  ComplexVector z(2);
  z << std::complex<double>(1, 2), std::complex<double>(3, -1);
  const ComplexVector tz = posop::apply(swap, z);
  CHECK(tz[0] == z[1]);
  CHECK(tz[1] == z[0]);
}

TEST_CASE("matrix_power agrees with repeated application") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = seq(oracle::sparse_matrix(4, 0.3, 0.0, rng));
    const auto t3 = matrix_power(t, 3);
    const RealVector f = oracle::sparse_positive(4, 0.0, 0.0, rng);
    const RealVector expected = apply(t, apply(t, apply(t, f)));
    CHECK((apply(t3, f) - expected).cwiseAbs().maxCoeff() <=
          1e-12 * (1.0 + expected.cwiseAbs().maxCoeff()));
    CHECK((t3.matrix() - oracle::naive_power(t.matrix(), 3)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("matrix_power is additive in the exponent") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto t = seq(oracle::sparse_matrix(5, 0.4, 0.0, rng) / 2.0);
    const std::size_t a = rng() % 7, b = rng() % 7;
    const Matrix lhs = matrix_power(t, a + b).matrix();
    const Matrix rhs = matrix_power(t, a).matrix() * matrix_power(t, b).matrix();
    CHECK((lhs - rhs).norm() <= 1e-10 * std::max(1.0, lhs.norm()));
  }
}

TEST_CASE("positivity is preserved") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = seq(oracle::sparse_matrix(6, 0.5, 0.0, rng));
    const RealVector f = oracle::sparse_positive(6, 0.5, 0.0, rng);
    CHECK(apply(t, f).minCoeff() >= 0.0);
  }
}

TEST_CASE("supports propagate monotonically under positive operators") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const auto t = seq(oracle::sparse_matrix(6, 0.6, 0.1, rng));
    const RealVector g = oracle::sparse_positive(6, 0.4, 0.1, rng);
    RealVector f = oracle::sparse_positive(6, 0.4, 0.1, rng);
    for (Eigen::Index i = 0; i < 6; ++i)
      if (g[i] == 0.0) f[i] = 0.0;
    CHECK(oracle::mask_inclusion(apply(t, f), apply(t, g)));
  }
}

TEST_CASE("cesaro_mean") {
  const auto swap = seq(mat({{0, 1}, {1, 0}}));
  CHECK(cesaro_mean(swap, 1).matrix() == Matrix::Identity(2, 2));
  CHECK(cesaro_mean(swap, 2).matrix().isApprox(Matrix::Constant(2, 2, 0.5)));
  CHECK_THROWS_AS(cesaro_mean(swap, 0), InvalidArgument);

  Matrix s = mat({{0.5, 0.5, 0}, {0.2, 0.3, 0.5}, {0.1, 0.1, 0.8}});
  const auto big = cesaro_mean(seq(s), std::size_t{1} << 20);
  // Rows of the limit are the stationary distribution: π T = π.
  const Eigen::RowVectorXd pi = big.matrix().row(0);
  CHECK((pi * s - pi).cwiseAbs().maxCoeff() <= 1e-5);
  CHECK((big.matrix().rowwise() - pi).cwiseAbs().maxCoeff() <= 1e-5);
}

TEST_CASE("power_sum matches the naive sum") {
  Matrix s = mat({{0.2, 0.3}, {0.4, 0.1}});
  Matrix acc = Matrix::Zero(2, 2);
  Matrix p = Matrix::Identity(2, 2);
  for (int k = 0; k < 13; ++k) {
    acc += p;
    p = p * s;
  }
  CHECK((power_sum(s, 13) - acc).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("sinkhorn_normalize gives a doubly stochastic matrix") {
  std::mt19937_64 rng(31);
  const auto t = seq(oracle::sparse_matrix(6, 0.0, 0.05, rng));
  const auto d = sinkhorn_normalize(t);
  CHECK((d.matrix().rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
  CHECK((d.matrix().colwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-10);
  CHECK_THROWS_AS(sinkhorn_normalize(seq(Matrix::Zero(2, 2))), InvalidArgument);
}

TEST_CASE("power_bound_estimate") {
  std::mt19937_64 rng(37);
  Matrix s = oracle::sparse_matrix(5, 0.3, 0.1, rng);
  for (Eigen::Index i = 0; i < 5; ++i) {
    if (s.row(i).sum() == 0.0) s(i, i) = 1.0;
    s.row(i) /= s.row(i).sum();
  }
  const auto stochastic = power_bound_estimate(seq(s), 20);
  CHECK(stochastic.sup_induced_inf == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(stochastic.bounded_guess);
  CHECK(stochastic.norms.size() == 20);

  const auto doubled = power_bound_estimate(seq(2.0 * Matrix::Identity(3, 3)), 10);
  CHECK(doubled.sup_norm == 1024.0);
  CHECK(doubled.sup_induced_inf == 1024.0);
  CHECK_FALSE(doubled.bounded_guess);

  const auto contraction = power_bound_estimate(seq(0.5 * Matrix::Identity(2, 2)), 5);
  CHECK(contraction.bounded_guess);

  // Jordan block at 1 grows linearly.
  const auto jordan = power_bound_estimate(seq(mat({{1, 1}, {0, 1}})), 40, 1.0);
  CHECK_FALSE(jordan.bounded_guess);
  CHECK_FALSE(power_bound_estimate(seq(mat({{1, 1}, {0, 1}})), 40).bounded_guess);
  CHECK_FALSE(
      power_bound_estimate(seq(mat({{1, 1, 0}, {0, 1, 1}, {0, 0, 1}})), 40).bounded_guess);

  CHECK_THROWS_AS(power_bound_estimate(seq(s), 0), InvalidArgument);
}

TEST_CASE("power_bound_estimate on stochastic matrices in l2") {
  // Riesz-Thorin norms of stochastic powers rise towards a finite limit;
  // the Gelfand bound can exceed 1 without spr doing so.
  std::mt19937_64 rng(41);
  int bounded = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 2 + rng() % 8;
    Matrix m = oracle::sparse_matrix(dim, 0.3, 0.05, rng);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      m(i, i) += 0.2;
      m.row(i) /= m.row(i).sum();
    }
    const auto pb = power_bound_estimate(seq(m), 40);
    CHECK(pb.sup_induced_inf == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pb.sup_norm <= std::sqrt(static_cast<double>(dim)) + 1e-12);
    if (pb.bounded_guess) ++bounded;
  }
  CHECK(bounded == 200);
}

TEST_CASE("power_bound_estimate selects the norm from the space") {
  const Matrix m = Matrix::Identity(2, 2);
  CHECK(power_bound_estimate(from_dense(m, SpaceSemantics::ck_uniform(2, 0, 1)), 2).norm_used ==
        NormKind::InducedInf);
  CHECK(power_bound_estimate(from_dense(m, SpaceSemantics::lp_midpoint(2, 0, 1, 1.0)), 2)
            .norm_used == NormKind::InducedOne);
  CHECK(power_bound_estimate(from_dense(m, SpaceSemantics::sequence(2, 2.0)), 2).norm_used ==
        NormKind::RieszThorin);
  CHECK(power_bound_estimate(from_dense(m, SpaceSemantics::sequence(2, INFINITY)), 2)
            .norm_used == NormKind::InducedInf);
}

TEST_CASE("induced norms") {
  const Matrix m = mat({{1, 2}, {3, 0}});
  CHECK(induced_inf_norm(m) == 3.0);
  CHECK(induced_one_norm(m, RealVector::Ones(2)) == 4.0);
  RealVector w(2);
  w << 1.0, 2.0;
  // column 0: (1·1 + 3·2)/1 = 7, column 1: (2·1 + 0)/2 = 1
  CHECK(induced_one_norm(m, w) == 7.0);
}
