#include "posop/verdicts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "posop/errors.hpp"
#include "posop/matrix_io.hpp"

namespace posop {

namespace {

using nlohmann::json;

constexpr double kFixedVectorTol = 1e-10;  // relative positivity floor for h
constexpr double kFixedResidualTol = 1e-8;

std::string format_complex(Complex z) {
  char buf[64];
  const double re = std::abs(z.real()) < 5e-13 ? 0.0 : z.real();
  const double im = std::abs(z.imag()) < 5e-13 ? 0.0 : z.imag();
  if (im == 0.0) {
    std::snprintf(buf, sizeof buf, "%.6g", re);
  } else {
    std::snprintf(buf, sizeof buf, "%.6g%+.6gi", re, im);
  }
  return buf;
}

std::string format_set(const std::vector<Complex>& values) {
  std::string out = "{";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_complex(values[i]);
  }
  return out + "}";
}

json complex_list(const std::vector<Complex>& values) {
  json out = json::array();
  for (Complex z : values) out.push_back(complex_to_json(z));
  return out;
}

Conclusion holds_if(bool ok) { return ok ? Conclusion::Holds : Conclusion::Violated; }

HypothesisCheck positivity_check(const Operator& t) {
  return {"positivity", true, json{{"min_entry", t.matrix().minCoeff()}}, ""};
}

HypothesisCheck power_bound_check(EngineContext& ctx) {
  const PowerBound& pb = ctx.power_bound();
  json w{{"sup_norm", pb.sup_norm},
         {"norm_used", to_string(pb.norm_used)},
         {"sup_induced_one", pb.sup_induced_one},
         {"sup_induced_inf", pb.sup_induced_inf},
         {"spr", pb.spr_used},
         {"horizon", pb.norms.size()},
         {"empirical_bounded", pb.bounded_guess}};
  const bool bounded =
      spectrally_power_bounded(ctx.spectrum(), ctx.op().matrix(), ctx.options().tol);
  return {"power_bounded", bounded, std::move(w),
          "spr < 1, or spr = 1 with eigenvalue 1 semisimple; norms of T^n as witness"};
}

HypothesisCheck expansion_check(EngineContext& ctx) {
  const ExpansionResult& r = ctx.expansion();
  const bool open = ctx.op().space().kind() == SpaceKind::CKGrid;
  json w{{"failing_basis", r.witnesses()},
         {"failed_samples", r.failed_samples},
         {"samples", r.samples},
         {"horizon", r.horizon}};
  const auto max_n = r.max_first_n();
  w["max_first_n"] = max_n ? json(*max_n) : json(nullptr);
  return {open ? "open_support_expansion" : "support_expansion", r.all_satisfied,
          std::move(w), "decided on basis vectors; random samples cross-check"};
}

SupportMask default_band(const Operator& t, double tau) {
  const double thr = tau < 0.0 ? default_entry_threshold(t.matrix()) : tau;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < t.dim(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    if (t.matrix()(k, k) > thr) idx.push_back(i);
  }
  return SupportMask(t.dim(), std::move(idx));
}

HypothesisCheck band_check(EngineContext& ctx) {
  const Operator& t = ctx.op();
  const auto& o = ctx.options();
  if (o.band && o.band->empty()) throw InvalidArgument("band S must be non-empty");
  const SupportMask band = o.band ? *o.band : default_band(t, o.tol_support);
  if (band.empty()) {
    return {"band_expansion", false, json{{"band", json::array()}},
            "no positive diagonal entry to build a band from"};
  }
  const bool ok = expands_support_on_band(t, band, o.tol_support);
  return {"band_expansion", ok, json{{"band", band.indices()}}, ""};
}

HypothesisCheck irreducible_check(EngineContext& ctx) {
  const bool ok = is_irreducible(ctx.op(), ctx.options().tol_support);
  return {"irreducible", ok, json(nullptr), ""};
}

HypothesisCheck finite_dimension_check(const char* name, const char* note) {
  return {name, true, json(nullptr), note};
}

// Fixed vector h = P₁·1 built from the spectral projection at 1.
struct FixedVector {
  RealVector h;
  bool fixed = false;
  bool strictly_positive = false;
};

FixedVector fixed_vector(EngineContext& ctx) {
  const Matrix& p = ctx.eigenprojection_one();
  const Matrix& m = ctx.op().matrix();
  FixedVector out;
  out.h = p * RealVector::Ones(m.rows());
  const double scale = out.h.size() ? out.h.cwiseAbs().maxCoeff() : 0.0;
  if (scale == 0.0) return out;
  out.fixed = (m * out.h - out.h).cwiseAbs().maxCoeff() <= kFixedResidualTol * scale;
  out.strictly_positive = out.fixed && out.h.minCoeff() > kFixedVectorTol * scale;
  return out;
}

// Hypothesis "every positive super-fixed vector is fixed", tested on basis
// vectors, the fixed vector P1·1 and seeded random positive vectors.
HypothesisCheck super_fixed_check(EngineContext& ctx) {
  const auto& o = ctx.options();
  const std::size_t n = ctx.op().dim();
  std::vector<RealVector> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    candidates.push_back(
        RealVector::Unit(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(i)));
  }
  const FixedVector fv = fixed_vector(ctx);
  if (fv.h.size() && fv.h.cwiseAbs().maxCoeff() > 0.0) candidates.push_back(fv.h.cwiseAbs());
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < o.samples; ++k) {
    RealVector f(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = unit(rng) < 0.5 ? 0.0 : unit(rng);
    if (f.maxCoeff() > 0.0) candidates.push_back(f);
  }
  std::size_t super_fixed = 0, not_fixed = 0;
  for (auto& f : candidates) {
    f /= f.maxCoeff();
    const SuperFixed sf = is_super_fixed(ctx.op(), f, kFixedResidualTol);
    if (!sf.super_fixed) continue;
    ++super_fixed;
    if (!sf.fixed) ++not_fixed;
  }
  return {"super_fixed_vectors_fixed", not_fixed == 0,
          json{{"candidates", candidates.size()},
               {"super_fixed", super_fixed},
               {"super_fixed_not_fixed", not_fixed}},
          "sampled: basis vectors, P1*1 and seeded random positive vectors"};
}

TheoremVerdict aperiodicity_verdict(EngineContext& ctx, HypothesisReport report) {
  const auto& o = ctx.options();
  const auto unimodular = unimodular_point_spectrum(ctx.spectrum(), o.tol);
  std::vector<Complex> offending;
  for (Complex z : unimodular) {
    if (std::abs(z - 1.0) > o.tol) offending.push_back(z);
  }
  TheoremVerdict v;
  v.report = std::move(report);
  v.predicted = "unimodular point spectrum within {1}";
  v.observed = "unimodular point spectrum " + format_set(unimodular);
  v.conclusion = holds_if(offending.empty());
  v.observed_detail = json{{"unimodular", complex_list(unimodular)},
                           {"offending", complex_list(offending)}};
  return v;
}

// Peripheral spectrum reduces to {spr}; tolerances scale with spr.
bool peripheral_is_spr(const Spectrum& s, double tol, std::vector<Complex>& peripheral) {
  const double scaled = tol * std::max(1.0, s.spr);
  peripheral = peripheral_spectrum(s, scaled);
  return std::all_of(peripheral.begin(), peripheral.end(),
                     [&](Complex z) { return std::abs(z - s.spr) <= scaled; });
}

}  // namespace

const char* to_string(TheoremId id) {
  switch (id) {
    case TheoremId::MainEverywhere: return "MainEverywhere";
    case TheoremId::MainIrreducible: return "MainIrreducible";
    case TheoremId::LatticeHomomorphism: return "LatticeHomomorphism";
    case TheoremId::DominatesIdentity: return "DominatesIdentity";
    case TheoremId::PowerDomination: return "PowerDomination";
    case TheoremId::ConvergenceEverywhere: return "ConvergenceEverywhere";
    case TheoremId::ConvergenceIrreducible: return "ConvergenceIrreducible";
    case TheoremId::CesaroABLV: return "CesaroABLV";
  }
  return "?";
}

const char* to_string(Conclusion c) {
  switch (c) {
    case Conclusion::Holds: return "holds";
    case Conclusion::Violated: return "violated";
    case Conclusion::Undetermined: return "undetermined";
  }
  return "?";
}

bool HypothesisReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const HypothesisCheck& c) { return c.passed; });
}

EngineContext::EngineContext(const Operator& t, EngineOptions options)
    : op_(t), options_(std::move(options)) {}

const Spectrum& EngineContext::spectrum() {
  if (!spectrum_) spectrum_ = eigenvalues(op_, options_.tol_eig);
  return *spectrum_;
}

const PowerBound& EngineContext::power_bound() {
  if (!power_bound_) {
    power_bound_ = power_bound_estimate(op_, options_.horizon_for(op_.dim()), spectrum().spr,
                                        options_.tol);
  }
  return *power_bound_;
}

const ConvergenceVerdict& EngineContext::convergence() {
  if (!convergence_) {
    ConvergenceOptions co;
    co.tol = options_.tol;
    co.k_max = options_.k_max;
    convergence_ = classify_power_convergence(spectrum(), op_, co);
  }
  return *convergence_;
}

const Matrix& EngineContext::eigenprojection_one() {
  if (!projection_one_) projection_one_ = eigenprojection_at_one(op_.matrix(), options_.tol);
  return *projection_one_;
}

const ExpansionResult& EngineContext::expansion() {
  if (!expansion_) {
    expansion_ = expands_support_everywhere(op_, options_.horizon_for(op_.dim()),
                                            options_.samples, options_.seed,
                                            options_.tol_support);
  }
  return *expansion_;
}

TheoremVerdict engine_main_everywhere(EngineContext& ctx) {
  HypothesisReport r;
  r.theorem_id = TheoremId::MainEverywhere;
  r.checks.push_back(positivity_check(ctx.op()));
  r.checks.push_back(power_bound_check(ctx));
  if (ctx.op().space().kind() == SpaceKind::CKGrid) {
    HypothesisCheck wap = r.checks.back();
    wap.name = "weakly_almost_periodic";
    wap.witness = nullptr;
    wap.note = "equivalent to power boundedness in finite dimension";
    r.checks.push_back(std::move(wap));
  }
  r.checks.push_back(expansion_check(ctx));
  return aperiodicity_verdict(ctx, std::move(r));
}

TheoremVerdict engine_main_irreducible(EngineContext& ctx) {
  HypothesisReport r;
  r.theorem_id = TheoremId::MainIrreducible;
  r.checks.push_back(positivity_check(ctx.op()));
  r.checks.push_back(power_bound_check(ctx));
  r.checks.push_back(irreducible_check(ctx));
  r.checks.push_back(band_check(ctx));
  return aperiodicity_verdict(ctx, std::move(r));
}

TheoremVerdict engine_lattice_homomorphism(EngineContext& ctx) {
  const auto& o = ctx.options();
  HypothesisReport r;
  r.theorem_id = TheoremId::LatticeHomomorphism;
  r.checks.push_back({"lattice_homomorphism",
                      is_lattice_homomorphism(ctx.op(), o.tol_support, o.seed), json(nullptr),
                      "at most one non-zero entry per row"});
  r.checks.push_back(expansion_check(ctx));

  const Spectrum& s = ctx.spectrum();
  const double slack = o.tol * (1.0 + s.norm_inf);
  std::vector<Complex> offending;
  for (const auto& e : s.eigenvalues) {
    if (std::abs(e.value.imag()) > slack || e.value.real() < -slack) offending.push_back(e.value);
  }
  TheoremVerdict v;
  v.report = std::move(r);
  v.predicted = "point spectrum within [0, inf)";
  v.observed = offending.empty() ? "all eigenvalues real and non-negative"
                                 : "eigenvalues off [0, inf): " + format_set(offending);
  v.conclusion = holds_if(offending.empty());
  v.observed_detail = json{{"offending", complex_list(offending)}};
  return v;
}

TheoremVerdict engine_dominates_identity(EngineContext& ctx) {
  const auto& o = ctx.options();
  const double eps = dominates_identity(ctx.op());
  const double thr =
      o.tol_support < 0.0 ? default_entry_threshold(ctx.op().matrix()) : o.tol_support;
  HypothesisReport r;
  r.theorem_id = TheoremId::DominatesIdentity;
  r.checks.push_back(positivity_check(ctx.op()));
  r.checks.push_back({"dominates_identity", eps > thr, json{{"epsilon", eps}}, ""});

  const Spectrum& s = ctx.spectrum();
  std::vector<Complex> peripheral;
  const bool per_ok = peripheral_is_spr(s, o.tol, peripheral);
  const bool disk_ok =
      disk_inclusion(s, std::min(eps, s.spr), o.tol_eig * (1.0 + s.norm_inf));
  TheoremVerdict v;
  v.report = std::move(r);
  v.predicted = "peripheral spectrum = {spr} and spectrum inside the disk of radius spr-eps at eps";
  v.observed = "peripheral spectrum " + format_set(peripheral) +
               (disk_ok ? ", disk inclusion holds" : ", disk inclusion fails");
  v.conclusion = holds_if(per_ok && disk_ok);
  v.observed_detail = json{{"peripheral", complex_list(peripheral)},
                           {"spr", s.spr},
                           {"disk_inclusion", disk_ok},
                           {"epsilon", eps}};
  return v;
}

TheoremVerdict engine_power_domination(EngineContext& ctx, std::size_t n) {
  const auto& o = ctx.options();
  const DominationResult d = power_domination(ctx.op(), n, o.tol_support);
  const Spectrum& s = ctx.spectrum();
  std::vector<Complex> peripheral;
  const bool per_ok = peripheral_is_spr(s, o.tol, peripheral);

  HypothesisReport r;
  r.theorem_id = TheoremId::PowerDomination;
  r.checks.push_back(positivity_check(ctx.op()));
  r.checks.push_back({"peripheral_cyclic",
                      is_cyclic(peripheral, o.tol * std::max(1.0, s.spr)),
                      json{{"peripheral", complex_list(peripheral)}}, ""});
  json w{{"n", n}, {"epsilon", d.epsilon_max}};
  if (d.witness_entry) w["entry"] = {d.witness_entry->first, d.witness_entry->second};
  r.checks.push_back({"power_domination", d.epsilon_max > 0.0, std::move(w), ""});

  TheoremVerdict v;
  v.report = std::move(r);
  v.predicted = "peripheral spectrum = {spr}";
  v.observed = "peripheral spectrum " + format_set(peripheral);
  v.conclusion = holds_if(per_ok);
  v.observed_detail = json{{"peripheral", complex_list(peripheral)}, {"spr", s.spr}};
  return v;
}

TheoremVerdict engine_convergence(EngineContext& ctx, ConvergenceVariant variant) {
  const auto& o = ctx.options();
  HypothesisReport r;
  switch (variant) {
    case ConvergenceVariant::Everywhere: {
      r.theorem_id = TheoremId::ConvergenceEverywhere;
      r.checks.push_back(power_bound_check(ctx));
      const FixedVector fv = fixed_vector(ctx);
      json w{{"min_entry", fv.h.size() ? fv.h.minCoeff() : 0.0}, {"fixed", fv.fixed}};
      r.checks.push_back({"strictly_positive_fixed_vector", fv.strictly_positive, std::move(w),
                          "quasi-interior point surrogate: all entries of P1*1 positive"});
      r.checks.push_back(finite_dimension_check("am_compact", "automatic in finite dimension"));
      r.checks.push_back(expansion_check(ctx));
      break;
    }
    case ConvergenceVariant::Irreducible: {
      r.theorem_id = TheoremId::ConvergenceIrreducible;
      r.checks.push_back(power_bound_check(ctx));
      r.checks.push_back(irreducible_check(ctx));
      r.checks.push_back(band_check(ctx));
      const FixedVector fv = fixed_vector(ctx);
      r.checks.push_back({"nonzero_fixed_vector", fv.fixed, json(nullptr), ""});
      r.checks.push_back(finite_dimension_check("order_continuous_norm",
                                                "automatic in finite dimension"));
      r.checks.push_back(finite_dimension_check(
          "am_compact_minorant", "K = identity = T^0 is AM-compact in finite dimension"));
      r.checks.push_back(super_fixed_check(ctx));
      break;
    }
    case ConvergenceVariant::CesaroABLV: {
      r.theorem_id = TheoremId::CesaroABLV;
      r.checks.push_back(positivity_check(ctx.op()));
      r.checks.push_back(power_bound_check(ctx));
      const auto mean = mean_ergodic_projection(ctx.op(), o.mean_ergodic_horizon, o.tol);
      r.checks.push_back({"mean_ergodic", mean.has_value(),
                          json{{"k_max", o.mean_ergodic_horizon}}, ""});
      std::optional<DominationResult> found;
      for (std::size_t n = 1; n <= std::max<std::size_t>(1, o.domination_n) && !found; ++n) {
        DominationResult d = power_domination(ctx.op(), n, o.tol_support);
        if (d.epsilon_max > 0.0) found = d;
      }
      json w = found ? json{{"n", found->n}, {"epsilon", found->epsilon_max}} : json(nullptr);
      r.checks.push_back({"power_domination", found.has_value(), std::move(w),
                          "searched n = 1.." + std::to_string(std::max<std::size_t>(1, o.domination_n))});
      break;
    }
  }

  const ConvergenceVerdict& cv = ctx.convergence();
  TheoremVerdict v;
  v.report = std::move(r);
  v.predicted = "T^k converges strongly";
  v.observed = to_string(cv.theoretical);
  switch (cv.theoretical) {
    case ConvergenceClass::ConvergesStrongly: v.conclusion = Conclusion::Holds; break;
    case ConvergenceClass::DivergesOrOscillates: v.conclusion = Conclusion::Violated; break;
    case ConvergenceClass::Inconclusive: v.conclusion = Conclusion::Undetermined; break;
  }
  v.observed_detail = json{{"k_star", cv.empirical.k_star ? json(*cv.empirical.k_star) : json(nullptr)},
                           {"final_residual", cv.empirical.final_residual}};
  return v;
}

TheoremVerdict engine_main_everywhere(const Operator& t, const EngineOptions& o) {
  EngineContext ctx(t, o);
  return engine_main_everywhere(ctx);
}
TheoremVerdict engine_main_irreducible(const Operator& t, const EngineOptions& o) {
  EngineContext ctx(t, o);
  return engine_main_irreducible(ctx);
}
TheoremVerdict engine_lattice_homomorphism(const Operator& t, const EngineOptions& o) {
  EngineContext ctx(t, o);
  return engine_lattice_homomorphism(ctx);
}
TheoremVerdict engine_dominates_identity(const Operator& t, const EngineOptions& o) {
  EngineContext ctx(t, o);
  return engine_dominates_identity(ctx);
}
TheoremVerdict engine_power_domination(const Operator& t, std::size_t n, const EngineOptions& o) {
  EngineContext ctx(t, o);
  return engine_power_domination(ctx, n);
}
TheoremVerdict engine_convergence(const Operator& t, ConvergenceVariant variant,
                                  const EngineOptions& o) {
  EngineContext ctx(t, o);
  return engine_convergence(ctx, variant);
}

json complex_to_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json spectrum_to_json(const Spectrum& s) {
  json out = json::array();
  for (const auto& e : s.eigenvalues) {
    out.push_back(json{{"re", e.value.real()},
                       {"im", e.value.imag()},
                       {"mult", e.multiplicity},
                       {"residual", e.residual}});
  }
  return out;
}

json verdict_to_json(const TheoremVerdict& v) {
  json checks = json::array();
  for (const auto& c : v.report.checks) {
    json item{{"name", c.name}, {"passed", c.passed}};
    if (!c.witness.is_null()) item["witness"] = c.witness;
    if (!c.note.empty()) item["note"] = c.note;
    checks.push_back(std::move(item));
  }
  return json{{"theorem_id", to_string(v.report.theorem_id)},
              {"checks", std::move(checks)},
              {"all_passed", v.report.all_passed()},
              {"predicted", v.predicted},
              {"observed", v.observed},
              {"observed_detail", v.observed_detail},
              {"conclusion", to_string(v.conclusion)},
              {"consistent", v.consistent()}};
}

bool AnalysisReport::soundness_violation() const {
  return std::any_of(verdicts.begin(), verdicts.end(),
                     [](const TheoremVerdict& v) { return !v.consistent(); });
}

AnalysisReport analyze(const Operator& t, const EngineOptions& options) {
  EngineContext ctx(t, options);
  AnalysisReport out;
  out.verdicts.push_back(engine_main_everywhere(ctx));
  out.verdicts.push_back(engine_main_irreducible(ctx));
  out.verdicts.push_back(engine_lattice_homomorphism(ctx));
  out.verdicts.push_back(engine_dominates_identity(ctx));
  out.verdicts.push_back(engine_power_domination(ctx, std::max<std::size_t>(1, options.domination_n)));
  out.verdicts.push_back(engine_convergence(ctx, ConvergenceVariant::Everywhere));
  out.verdicts.push_back(engine_convergence(ctx, ConvergenceVariant::Irreducible));
  out.verdicts.push_back(engine_convergence(ctx, ConvergenceVariant::CesaroABLV));

  const Spectrum& s = ctx.spectrum();
  json structure;
  const bool irreducible = is_irreducible(t, options.tol_support);
  structure["irreducible"] = irreducible;
  structure["period"] = nullptr;
  if (irreducible) {
    try {
      structure["period"] = period(t, options.tol_support);
    } catch (const InvalidArgument&) {
    }
  }
  structure["diagonal_epsilon"] = dominates_identity(t);
  structure["lattice_homomorphism"] = is_lattice_homomorphism(t, options.tol_support, options.seed);
  const DominationResult d2 =
      power_domination(t, std::max<std::size_t>(1, options.domination_n), options.tol_support);
  structure["power_domination"] = json{{"n", d2.n}, {"epsilon", d2.epsilon_max}};
  const ExpansionResult& ex = ctx.expansion();
  const auto max_n = ex.max_first_n();
  structure["expansion"] = json{{"all_satisfied", ex.all_satisfied},
                                {"failing_basis", ex.witnesses()},
                                {"max_first_n", max_n ? json(*max_n) : json(nullptr)}};

  const PowerBound& pb = ctx.power_bound();
  const ConvergenceVerdict& cv = ctx.convergence();
  json engines = json::array();
  for (const auto& v : out.verdicts) engines.push_back(verdict_to_json(v));

  out.json = json{
      {"label", t.label()},
      {"dim", t.dim()},
      {"semantics", json{{"kind", to_string(t.space().kind())}, {"p", exponent_to_json(t.space().p())}}},
      {"spectrum", spectrum_to_json(s)},
      {"spr", s.spr},
      {"structure", std::move(structure)},
      {"power_bound", json{{"sup_norm", pb.sup_norm},
                           {"norm_used", to_string(pb.norm_used)},
                           {"sup_induced_one", pb.sup_induced_one},
                           {"sup_induced_inf", pb.sup_induced_inf},
                           {"bounded_guess", pb.bounded_guess}}},
      {"convergence", json{{"theoretical", to_string(cv.theoretical)},
                           {"k_star", cv.empirical.k_star ? json(*cv.empirical.k_star) : json(nullptr)},
                           {"final_residual", cv.empirical.final_residual},
                           {"iterations", cv.empirical.iterations},
                           {"one_semisimple", cv.one_semisimple}}},
      {"engines", std::move(engines)},
      {"soundness_violation", out.soundness_violation()},
  };
  return out;
}

}  // namespace posop
