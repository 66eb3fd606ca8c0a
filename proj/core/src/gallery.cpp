#include "posop/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "posop/campaign.hpp"
#include "posop/errors.hpp"
#include "posop/matrix_io.hpp"
#include "posop/spectral.hpp"
#include "posop/structure.hpp"
#include "posop/verdicts.hpp"

namespace posop {

namespace {

using nlohmann::json;

class Params {
 public:
  Params(const std::string& scenario, const Overrides& overrides,
         std::set<std::string> allowed)
      : overrides_(overrides) {
    for (const auto& [key, value] : overrides) {
      if (!allowed.count(key)) {
        throw InvalidArgument("scenario \"" + scenario + "\" has no parameter \"" + key + "\"");
      }
    }
  }

  std::size_t size(const std::string& key, std::size_t fallback) {
    const auto it = overrides_.find(key);
    std::size_t v = fallback;
    if (it != overrides_.end()) {
      try {
        std::size_t used = 0;
        const long long parsed = std::stoll(it->second, &used);
        if (used != it->second.size() || parsed < 0) throw std::invalid_argument("");
        v = static_cast<std::size_t>(parsed);
      } catch (const std::exception&) {
        throw InvalidArgument("parameter \"" + key + "\" expects a non-negative integer");
      }
    }
    json_[key] = v;
    return v;
  }

  double real(const std::string& key, double fallback) {
    const auto it = overrides_.find(key);
    double v = fallback;
    if (it != overrides_.end()) {
      try {
        std::size_t used = 0;
        v = std::stod(it->second, &used);
        if (used != it->second.size() || !std::isfinite(v)) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw InvalidArgument("parameter \"" + key + "\" expects a finite number");
      }
    }
    json_[key] = v;
    return v;
  }

  // Norm exponent: a finite number or "inf".
  double exponent(const std::string& key, double fallback) {
    const auto it = overrides_.find(key);
    if (it != overrides_.end() && it->second == "inf") {
      json_[key] = exponent_to_json(std::numeric_limits<double>::infinity());
      return std::numeric_limits<double>::infinity();
    }
    const double v = real(key, fallback);
    json_[key] = exponent_to_json(v);
    return v;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const auto it = overrides_.find(key);
    std::string v = it == overrides_.end() ? fallback : it->second;
    json_[key] = v;
    return v;
  }

  const json& as_json() const { return json_; }

 private:
  const Overrides& overrides_;
  json json_ = json::object();
};

AssertionOutcome outcome(std::string name, bool passed, json measured, double tol) {
  return AssertionOutcome{std::move(name), passed, std::move(measured), tol};
}

json complex_list(const std::vector<Complex>& zs) {
  json out = json::array();
  for (Complex z : zs) out.push_back(complex_to_json(z));
  return out;
}

json indices(const std::vector<std::size_t>& idx) {
  json out = json::array();
  for (std::size_t i : idx) out.push_back(i);
  return out;
}

bool unimodular_within_one(const Operator& t, std::vector<Complex>* found) {
  const Spectrum s = eigenvalues(t);
  *found = unimodular_point_spectrum(s);
  return std::all_of(found->begin(), found->end(),
                     [](Complex z) { return std::abs(z - 1.0) <= kUnimodularTol; });
}

Assertion unimodular_subset_of_one(const Operator& t) {
  return {"unimodular_spectrum_subset_of_one", kUnimodularTol, [t] {
            std::vector<Complex> found;
            const bool ok = unimodular_within_one(t, &found);
            return outcome("unimodular_spectrum_subset_of_one", ok, complex_list(found),
                           kUnimodularTol);
          }};
}

Assertion engine_assertion(const std::string& name, const Operator& t,
                           std::function<TheoremVerdict(EngineContext&)> run,
                           bool require_hypotheses, std::uint64_t seed) {
  return {name, 0.0, [=] {
            EngineOptions options;
            options.seed = seed;
            EngineContext ctx(t, options);
            const TheoremVerdict v = run(ctx);
            const bool passed = v.consistent() && (!require_hypotheses || v.report.all_passed());
            return outcome(name, passed, verdict_to_json(v), 0.0);
          }};
}

/// Every engine run by analyze() stays consistent.
Assertion soundness_assertion(const Operator& t, std::uint64_t seed) {
  return {"analysis_sound", 0.0, [t, seed] {
            EngineOptions options;
            options.seed = seed;
            const AnalysisReport report = analyze(t, options);
            json failing = json::array();
            for (const auto& v : report.verdicts) {
              if (!v.consistent()) failing.push_back(to_string(v.report.theorem_id));
            }
            return outcome("analysis_sound", !report.soundness_violation(),
                           json{{"inconsistent_engines", failing}}, 0.0);
          }};
}

// ---------------------------------------------------------------- scenarios

Scenario weakly_expanding(const Overrides& overrides) {
  Params params("weakly_expanding", overrides, {"m"});
  const std::size_t m = params.size("m", 201);
  if (m < 3 || m % 2 == 0) throw InvalidArgument("weakly_expanding needs an odd m >= 3");

  const auto n = static_cast<Eigen::Index>(m);
  const double half = static_cast<double>(m - 1);
  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = (2.0 * static_cast<double>(i) - half) / half;
  const SpaceSemantics space = SpaceSemantics::ck_grid(x);

  RealVector u(n), v(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    u[i] = 1.0 - std::abs(xi);
    v[i] = xi <= 0.0 ? std::abs(xi) : 0.0;
    w[i] = xi >= 0.0 ? std::abs(xi) : 0.0;
  }
  // Half the trapezoid rule on [-1, 1], and point evaluations at ±1.
  const double h = 2.0 / half;
  RealVector integral = RealVector::Constant(n, 0.5 * h);
  integral[0] = integral[n - 1] = 0.25 * h;
  RealVector at_right = RealVector::Zero(n), at_left = RealVector::Zero(n);
  at_right[n - 1] = 1.0;
  at_left[0] = 1.0;

  Operator t = finite_rank({u, v, w}, {{integral}, {at_right}, {at_left}}, space,
                           "weakly_expanding");
  const RealVector eig = v - w;

  Scenario s{"weakly_expanding", params.as_json(), t, {}};
  s.expected.push_back({"fixes_constants", 2.0 / static_cast<double>(m), [t, m] {
                          const RealVector one = RealVector::Ones(static_cast<Eigen::Index>(m));
                          const double err = (apply(t, one) - one).cwiseAbs().maxCoeff();
                          const double tol = 2.0 / static_cast<double>(m);
                          return outcome("fixes_constants", err <= tol, err, tol);
                        }});
  s.expected.push_back({"eigenvalue_minus_one", kEigenTol, [t] {
                          const Spectrum sp = eigenvalues(t);
                          double best = std::numeric_limits<double>::infinity();
                          for (const auto& e : sp.eigenvalues) {
                            best = std::min(best, std::abs(e.value + 1.0));
                          }
                          return outcome("eigenvalue_minus_one", best <= kEigenTol, best,
                                         kEigenTol);
                        }});
  s.expected.push_back({"antisymmetric_eigenvector", 1e-12, [t, eig] {
                          const double err = (apply(t, eig) + eig).cwiseAbs().maxCoeff();
                          return outcome("antisymmetric_eigenvector", err <= 1e-12, err, 1e-12);
                        }});
  s.expected.push_back({"expansion_fails_at_endpoints", 0.0, [t, m] {
                          const ExpansionResult r = expands_support_everywhere(t, 2 * m, 16, 0);
                          const auto wit = r.witnesses();
                          const bool ok = !r.all_satisfied &&
                                          wit == std::vector<std::size_t>{0, m - 1};
                          return outcome("expansion_fails_at_endpoints", ok,
                                         json{{"witnesses", indices(wit)},
                                              {"failed_samples", r.failed_samples}},
                                         0.0);
                        }});
  s.expected.push_back({"closed_support_expansion_holds", 0.0, [t, m] {
                          // Closed supports grow: the endpoints are limits of
                          // interior points, so the closed ideals do not shrink.
                          const Matrix& a = t.matrix();
                          const double tau = default_entry_threshold(a);
                          std::vector<std::size_t> failing;
                          for (std::size_t i = 0; i < m; ++i) {
                            RealVector f = RealVector::Zero(static_cast<Eigen::Index>(m));
                            f[static_cast<Eigen::Index>(i)] = 1.0;
                            SupportMask prev = grid_closure(support(f, 0.0));
                            bool found = false;
                            for (std::size_t k = 1; k <= 2 * m && !found; ++k) {
                              f = a * f;
                              f /= std::max(f.maxCoeff(), std::numeric_limits<double>::min());
                              SupportMask next = grid_closure(support(f, tau));
                              found = mask_subseteq(prev, next);
                              prev = std::move(next);
                            }
                            if (!found) failing.push_back(i);
                          }
                          return outcome("closed_support_expansion_holds", failing.empty(),
                                         json{{"failing", indices(failing)}}, 0.0);
                        }});
  s.expected.push_back({"interior_images_vanish_at_endpoints", 0.0, [t, m] {
                          const Matrix& a = t.matrix();
                          const auto last = static_cast<Eigen::Index>(m - 1);
                          double worst = 0.0;
                          for (Eigen::Index j = 1; j < last; ++j) {
                            worst = std::max({worst, a(0, j), a(last, j)});
                          }
                          return outcome("interior_images_vanish_at_endpoints", worst == 0.0,
                                         worst, 0.0);
                        }});
  s.expected.push_back({"sup_norm_is_one", 1e-12, [t] {
                          const double nrm = induced_inf_norm(t.matrix());
                          return outcome("sup_norm_is_one", std::abs(nrm - 1.0) <= 1e-12, nrm,
                                         1e-12);
                        }});
  s.expected.push_back({"main_everywhere_hypotheses_fail", 0.0, [t] {
                          const TheoremVerdict v = engine_main_everywhere(t);
                          const bool ok = v.consistent() && !v.report.all_passed();
                          return outcome("main_everywhere_hypotheses_fail", ok,
                                         verdict_to_json(v), 0.0);
                        }});
  s.expected.push_back(soundness_assertion(t, 0));
  return s;
}

Scenario nagler(const Overrides& overrides) {
  Params params("nagler", overrides, {"D", "d", "seed"});
  const std::size_t dim = params.size("D", 12);
  const std::size_t terms = params.size("d", 4);
  const std::uint64_t seed = params.size("seed", 7);
  if (dim < 1 || terms < 1 || terms > dim) {
    throw InvalidArgument("nagler needs 1 <= d <= D");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  std::bernoulli_distribution present(0.5);
  const auto n = static_cast<Eigen::Index>(dim);

  std::vector<RealVector> es(terms, RealVector::Zero(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < terms; ++j) {
      const bool owner = static_cast<std::size_t>(i) % terms == j;
      if (owner || present(rng)) es[j][i] = weight(rng);
    }
  }
  RealVector e = RealVector::Zero(n);
  for (const auto& ej : es) e += ej;
  const SpaceSemantics space = SpaceSemantics::sequence(dim, 2.0);
  std::vector<Functional> alphas;
  for (std::size_t j = 0; j < terms; ++j) {
    RealVector a(n);
    for (Eigen::Index i = 0; i < n; ++i) a[i] = weight(rng);
    a /= pair({a}, e, space);
    alphas.push_back({a});
  }
  Operator t = finite_rank(es, alphas, space, "nagler");

  Scenario s{"nagler", params.as_json(), t, {}};
  s.expected.push_back({"fixes_e", 1e-12, [t, e] {
                          const double err =
                              (apply(t, e) - e).cwiseAbs().maxCoeff() / e.cwiseAbs().maxCoeff();
                          return outcome("fixes_e", err <= 1e-12, err, 1e-12);
                        }});
  s.expected.push_back({"expands_in_one_step", 0.0, [t, dim] {
                          const ExpansionResult r = expands_support_everywhere(t, 2 * dim, 16, 0);
                          const auto first = r.max_first_n();
                          const bool ok = r.all_satisfied && first && *first == 1;
                          return outcome("expands_in_one_step", ok,
                                         first ? json(*first) : json(nullptr), 0.0);
                        }});
  s.expected.push_back(engine_assertion(
      "main_everywhere_passes", t, [](EngineContext& c) { return engine_main_everywhere(c); },
      true, seed));
  s.expected.push_back(unimodular_subset_of_one(t));
  s.expected.push_back(soundness_assertion(t, seed));
  return s;
}

Scenario diagonal_strip(const Overrides& overrides) {
  Params params("diagonal_strip", overrides, {"m", "delta"});
  const std::size_t m = params.size("m", 100);
  const double delta = params.real("delta", 0.2);
  if (m < 2) throw InvalidArgument("diagonal_strip needs m >= 2");
  if (!(delta > 0.0)) throw InvalidArgument("diagonal_strip needs delta > 0");

  const Operator kernel = kernel_on_grid(
      [delta](double x, double y) { return std::abs(x - y) < delta ? 1.0 : 0.0; }, m, 0.0,
      1.0, 1.0);
  const Operator scaled = sinkhorn_normalize(kernel);
  Operator t = scaled.with_matrix(scaled.matrix(), "diagonal_strip");

  Scenario s{"diagonal_strip", params.as_json(), t, {}};
  s.expected.push_back({"row_sums_one", 1e-9, [t] {
                          const double err =
                              (t.matrix().rowwise().sum().array() - 1.0).abs().maxCoeff();
                          return outcome("row_sums_one", err <= 1e-9, err, 1e-9);
                        }});
  s.expected.push_back({"column_sums_one", 1e-9, [t] {
                          const double err =
                              (t.matrix().colwise().sum().array() - 1.0).abs().maxCoeff();
                          return outcome("column_sums_one", err <= 1e-9, err, 1e-9);
                        }});
  s.expected.push_back({"converges_strongly", 0.0, [t] {
                          const ConvergenceVerdict v =
                              classify_power_convergence(eigenvalues(t), t);
                          const bool ok = v.theoretical == ConvergenceClass::ConvergesStrongly;
                          return outcome("converges_strongly", ok,
                                         json{{"class", to_string(v.theoretical)},
                                              {"k_star", v.empirical.k_star
                                                             ? json(*v.empirical.k_star)
                                                             : json(nullptr)}},
                                         0.0);
                        }});
  s.expected.push_back({"powers_reach_mean_ergodic_projection", 1e-6, [t] {
                          const auto p = mean_ergodic_projection(t);
                          if (!p) {
                            return outcome("powers_reach_mean_ergodic_projection", false,
                                           json{{"mean_ergodic", false}}, 1e-6);
                          }
                          Matrix power = Matrix::Identity(t.matrix().rows(), t.matrix().cols());
                          std::optional<std::size_t> hit;
                          double last = 0.0;
                          for (std::size_t k = 0; k <= 5000; ++k) {
                            last = induced_inf_norm(power - p->matrix());
                            if (last <= 1e-6) {
                              hit = k;
                              break;
                            }
                            power = power * t.matrix();
                          }
                          return outcome("powers_reach_mean_ergodic_projection", hit.has_value(),
                                         json{{"k", hit ? json(*hit) : json(nullptr)},
                                              {"distance", last}},
                                         1e-6);
                        }});
  s.expected.push_back({"limit_rank_one", 0.0, [t] {
                          const ConvergenceVerdict v =
                              classify_power_convergence(eigenvalues(t), t);
                          if (!v.limit) {
                            return outcome("limit_rank_one", false, json{{"limit", nullptr}}, 0.0);
                          }
                          const Matrix& lim = v.limit->matrix();
                          const double thr = rank_tolerance(lim);
                          const std::size_t r = numerical_rank(lim, thr);
                          return outcome("limit_rank_one", r == 1,
                                         json{{"rank", r}, {"threshold", thr}}, thr);
                        }});
  s.expected.push_back(engine_assertion(
      "convergence_everywhere_passes", t,
      [](EngineContext& c) { return engine_convergence(c, ConvergenceVariant::Everywhere); },
      true, 0));
  s.expected.push_back(soundness_assertion(t, 0));
  return s;
}

Scenario sequence_positive_diagonal(const Overrides& overrides) {
  Params params("sequence_positive_diagonal", overrides, {"dim", "bandwidth", "p", "seed"});
  const std::size_t dim = params.size("dim", 20);
  const std::size_t band = params.size("bandwidth", 2);
  const double p = params.exponent("p", 2.0);
  const std::uint64_t seed = params.size("seed", 11);
  if (dim < 1) throw InvalidArgument("sequence_positive_diagonal needs dim >= 1");
  if (!(p >= 1.0)) throw InvalidArgument("sequence_positive_diagonal needs p >= 1");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  const auto n = static_cast<Eigen::Index>(dim);
  const auto b = static_cast<Eigen::Index>(band);
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = std::max<Eigen::Index>(0, i - b); j <= std::min(n - 1, i + b); ++j) {
      m(i, j) = weight(rng);
    }
    m.row(i) /= m.row(i).sum();
  }
  Operator t(std::move(m), SpaceSemantics::sequence(dim, p), "sequence_positive_diagonal");

  Scenario s{"sequence_positive_diagonal", params.as_json(), t, {}};
  s.expected.push_back({"positive_diagonal", 0.0, [t] {
                          const double eps = dominates_identity(t);
                          return outcome("positive_diagonal", eps > 0.0, eps, 0.0);
                        }});
  s.expected.push_back(engine_assertion(
      "convergence_everywhere_passes", t,
      [](EngineContext& c) { return engine_convergence(c, ConvergenceVariant::Everywhere); },
      true, seed));
  s.expected.push_back(engine_assertion(
      "main_everywhere_passes", t, [](EngineContext& c) { return engine_main_everywhere(c); },
      true, seed));
  s.expected.push_back(unimodular_subset_of_one(t));
  s.expected.push_back(soundness_assertion(t, seed));
  return s;
}

Scenario irreducible_one_diagonal(const Overrides& overrides) {
  Params params("irreducible_one_diagonal", overrides, {"dim", "seed"});
  const std::size_t dim = params.size("dim", 8);
  const std::uint64_t seed = params.size("seed", 3);
  if (dim < 1) throw InvalidArgument("irreducible_one_diagonal needs dim >= 1");
  std::mt19937_64 rng(seed);
  Operator t(random_irreducible_one_diag(dim, rng), SpaceSemantics::sequence(dim, 2.0),
             "irreducible_one_diagonal");

  Scenario s{"irreducible_one_diagonal", params.as_json(), t, {}};
  s.expected.push_back({"one_positive_diagonal_entry", 0.0, [t] {
                          const auto count = (t.matrix().diagonal().array() > 0.0).count();
                          return outcome("one_positive_diagonal_entry", count == 1, count, 0.0);
                        }});
  s.expected.push_back({"aperiodic", 0.0, [t] {
                          const std::size_t d = period(t);
                          return outcome("aperiodic", d == 1, d, 0.0);
                        }});
  s.expected.push_back(engine_assertion(
      "main_irreducible_passes", t, [](EngineContext& c) { return engine_main_irreducible(c); },
      true, seed));
  s.expected.push_back(engine_assertion(
      "convergence_irreducible_passes", t,
      [](EngineContext& c) { return engine_convergence(c, ConvergenceVariant::Irreducible); },
      true, seed));
  s.expected.push_back(unimodular_subset_of_one(t));
  s.expected.push_back(soundness_assertion(t, seed));
  return s;
}

Scenario partition(const Overrides& overrides) {
  Params params("partition", overrides, {"N", "b", "overlap", "pairing", "seed"});
  const std::size_t blocks = params.size("N", 6);
  const std::size_t cells = params.size("b", 5);
  const double overlap = params.real("overlap", 0.0);
  const std::string kind = params.text("pairing", "cyclic");
  const std::uint64_t seed = params.size("seed", 1);

  std::vector<std::size_t> pairing;
  if (kind == "cyclic") {
    pairing = cyclic_pairing(blocks);
  } else if (kind == "identity") {
    pairing.resize(blocks);
    for (std::size_t k = 0; k < blocks; ++k) pairing[k] = k;
  } else if (kind == "random") {
    pairing.resize(blocks);
    for (std::size_t k = 0; k < blocks; ++k) pairing[k] = k;
    std::mt19937_64 rng(seed);
    std::shuffle(pairing.begin(), pairing.end(), rng);
  } else {
    throw InvalidArgument("pairing must be cyclic, identity or random");
  }
  const Operator base = partition_operator(blocks, cells, pairing, overlap);
  Operator t = base.with_matrix(base.matrix(), "partition");

  Scenario s{"partition", params.as_json(), t, {}};
  s.parameters["pairing_map"] = pairing;
  const bool fixed_point_free = std::none_of(
      pairing.begin(), pairing.end(), [&, k = std::size_t{0}](std::size_t p) mutable {
        return p == k++;
      });

  if (overlap == 0.0 && kind == "cyclic") {
    s.expected.push_back({"blocks_shift_exactly", 0.0, [t, blocks, cells] {
                            RealVector f = partition_block_indicator(blocks, cells, 0);
                            std::optional<std::size_t> bad;
                            for (std::size_t k = 0; k <= 2 * blocks && !bad; ++k) {
                              if (f != partition_block_indicator(blocks, cells, k % blocks)) {
                                bad = k;
                              }
                              f = apply(t, f);
                            }
                            return outcome("blocks_shift_exactly", !bad,
                                           json{{"first_mismatch",
                                                 bad ? json(*bad) : json(nullptr)}},
                                           0.0);
                          }});
    s.expected.push_back({"period_is_N", 0.0, [t, blocks] {
                            const std::size_t d = period(t);
                            return outcome("period_is_N", d == blocks, d, 0.0);
                          }});
    s.expected.push_back({"unimodular_are_roots_of_unity", kEigenTol, [t, blocks] {
                            const auto found = unimodular_point_spectrum(eigenvalues(t));
                            const double tol = kEigenTol;
                            bool ok = found.size() == blocks;
                            for (std::size_t k = 0; k < blocks && ok; ++k) {
                              const Complex root = std::polar(
                                  1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                           static_cast<double>(blocks));
                              ok = std::any_of(found.begin(), found.end(), [&](Complex z) {
                                return std::abs(z - root) <= tol;
                              });
                            }
                            return outcome("unimodular_are_roots_of_unity", ok,
                                           complex_list(found), tol);
                          }});
    s.expected.push_back({"powers_do_not_converge", 0.0, [t] {
                            const ConvergenceVerdict v =
                                classify_power_convergence(eigenvalues(t), t);
                            const bool ok =
                                v.theoretical == ConvergenceClass::DivergesOrOscillates &&
                                !v.empirical.k_star;
                            return outcome("powers_do_not_converge", ok,
                                           json{{"class", to_string(v.theoretical)},
                                                {"final_residual", v.empirical.final_residual}},
                                           0.0);
                          }});
  }
  if (overlap > 0.0) {
    s.expected.push_back({"power_domination_epsilon", 1e-12, [t, overlap, fixed_point_free] {
                            const DominationResult d = power_domination(t, 2);
                            // A block paired with itself is mapped onto itself,
                            // which can only raise the constant.
                            const bool ok = fixed_point_free
                                                ? std::abs(d.epsilon_max - overlap) <= 1e-12
                                                : d.epsilon_max >= overlap - 1e-12;
                            return outcome("power_domination_epsilon", ok, d.epsilon_max, 1e-12);
                          }});
    s.expected.push_back({"converges_strongly", 0.0, [t] {
                            const ConvergenceVerdict v =
                                classify_power_convergence(eigenvalues(t), t);
                            const bool ok =
                                v.theoretical == ConvergenceClass::ConvergesStrongly &&
                                v.empirical.k_star && *v.empirical.k_star <= 2000;
                            return outcome("converges_strongly", ok,
                                           json{{"class", to_string(v.theoretical)},
                                                {"k_star", v.empirical.k_star
                                                               ? json(*v.empirical.k_star)
                                                               : json(nullptr)}},
                                           0.0);
                          }});
    s.expected.push_back(engine_assertion(
        "power_domination_passes", t,
        [](EngineContext& c) { return engine_power_domination(c, 2); }, true, seed));
  }
  s.expected.push_back(soundness_assertion(t, seed));
  return s;
}

struct Entry {
  const char* name;
  const char* description;
  Scenario (*build)(const Overrides&);
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {"weakly_expanding",
       "C[-1,1] grid operator u⊗α + v⊗δ₁ + w⊗δ₋₁; fixes constants, has eigenvalue -1", 
       &weakly_expanding},
      {"nagler", "finite-rank Σ e_j ⊗ α_j with <α_j, e> = 1, fixing e = Σ e_j", &nagler},
      {"diagonal_strip", "doubly stochastic kernel 1{|x-y| < δ} on L¹[0,1]", &diagonal_strip},
      {"sequence_positive_diagonal", "banded stochastic matrix with positive diagonal",
       &sequence_positive_diagonal},
      {"irreducible_one_diagonal", "irreducible stochastic matrix, one positive diagonal entry",
       &irreducible_one_diagonal},
      {"partition", "circular partition operator with N blocks of b cells and overlap ε",
       &partition},
  };
  return entries;
}

const Entry& lookup(const std::string& name) {
  for (const auto& e : registry()) {
    if (name == e.name) return e;
  }
  throw UnknownScenario("unknown scenario \"" + name + "\"");
}

}  // namespace

std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const auto& e : registry()) out.emplace_back(e.name);
  return out;
}

std::string scenario_description(const std::string& name) { return lookup(name).description; }

Scenario build_scenario(const std::string& name, const Overrides& overrides) {
  return lookup(name).build(overrides);
}

ScenarioRun run_scenario(const Scenario& scenario) {
  ScenarioRun run{scenario.name, scenario.parameters, {}, true};
  for (const auto& a : scenario.expected) {
    AssertionOutcome o = a.check();
    run.all_passed = run.all_passed && o.passed;
    run.outcomes.push_back(std::move(o));
  }
  return run;
}

nlohmann::json scenario_run_to_json(const ScenarioRun& run) {
  json outcomes = json::array();
  for (const auto& o : run.outcomes) {
    outcomes.push_back(json{{"name", o.name},
                            {"passed", o.passed},
                            {"measured", o.measured},
                            {"tolerance", o.tolerance}});
  }
  return json{{"scenario", run.name},
              {"parameters", run.parameters},
              {"assertions", std::move(outcomes)},
              {"all_passed", run.all_passed}};
}

Overrides parse_overrides(const std::vector<std::string>& tokens) {
  Overrides out;
  for (const auto& tok : tokens) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw InvalidArgument("override \"" + tok + "\" is not of the form key=value");
    }
    out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}

SupportMask grid_closure(const SupportMask& mask) {
  std::vector<std::size_t> idx;
  for (std::size_t i : mask.indices()) {
    if (i > 0) idx.push_back(i - 1);
    idx.push_back(i);
    if (i + 1 < mask.dim()) idx.push_back(i + 1);
  }
  return SupportMask(mask.dim(), std::move(idx), mask.semantics());
}

}  // namespace posop
