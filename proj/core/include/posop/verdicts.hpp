#ifndef POSOP_VERDICTS_HPP
#define POSOP_VERDICTS_HPP

// Theorem engines: each engine evaluates the hypotheses of one aperiodicity
// or convergence theorem on a concrete operator and compares the predicted
// spectral conclusion with what the spectrum shows.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "posop/lattice.hpp"
#include "posop/operators.hpp"
#include "posop/spectral.hpp"
#include "posop/structure.hpp"

namespace posop {

enum class TheoremId {
  MainEverywhere,
  MainIrreducible,
  LatticeHomomorphism,
  DominatesIdentity,
  PowerDomination,
  ConvergenceEverywhere,
  ConvergenceIrreducible,
  CesaroABLV,
};

const char* to_string(TheoremId id);

struct HypothesisCheck {
  std::string name;
  bool passed = false;
  nlohmann::json witness;  // null when there is nothing to show
  std::string note;
};

struct HypothesisReport {
  TheoremId theorem_id = TheoremId::MainEverywhere;
  std::vector<HypothesisCheck> checks;

  bool all_passed() const;
};

enum class Conclusion { Holds, Violated, Undetermined };

const char* to_string(Conclusion c);

struct TheoremVerdict {
  HypothesisReport report;
  std::string predicted;
  std::string observed;
  Conclusion conclusion = Conclusion::Undetermined;
  nlohmann::json observed_detail;

  /// Hypotheses holding while the conclusion fails is the only inconsistency.
  bool consistent() const {
    return !(report.all_passed() && conclusion == Conclusion::Violated);
  }
};

enum class ConvergenceVariant { Everywhere, Irreducible, CesaroABLV };

struct EngineOptions {
  std::size_t horizon = 0;   // 0 selects 2·dim
  std::size_t samples = 16;  // random vectors for the expansion check
  std::uint64_t seed = 0;
  double tol_eig = kEigenTol;
  double tol = kUnimodularTol;
  double tol_support = -1.0;  // entry threshold; < 0 selects the relative default
  std::size_t k_max = 5000;
  std::size_t mean_ergodic_horizon = kMeanErgodicHorizon;
  std::size_t domination_n = 2;  // n used by the Cesàro variant
  std::optional<SupportMask> band;  // S for the irreducible engines

  std::size_t horizon_for(std::size_t dim) const { return horizon ? horizon : 2 * dim; }
};

/// Shared, lazily filled analysis state so several engines on one operator
/// compute the spectrum and the convergence classification once.
class EngineContext {
 public:
  EngineContext(const Operator& t, EngineOptions options);

  const Operator& op() const { return op_; }
  const EngineOptions& options() const { return options_; }
  const Spectrum& spectrum();
  const PowerBound& power_bound();
  const ConvergenceVerdict& convergence();
  const Matrix& eigenprojection_one();
  const ExpansionResult& expansion();

 private:
  const Operator& op_;
  EngineOptions options_;
  std::optional<Spectrum> spectrum_;
  std::optional<PowerBound> power_bound_;
  std::optional<ConvergenceVerdict> convergence_;
  std::optional<Matrix> projection_one_;
  std::optional<ExpansionResult> expansion_;
};

TheoremVerdict engine_main_everywhere(EngineContext& ctx);
TheoremVerdict engine_main_irreducible(EngineContext& ctx);
TheoremVerdict engine_lattice_homomorphism(EngineContext& ctx);
TheoremVerdict engine_dominates_identity(EngineContext& ctx);
TheoremVerdict engine_power_domination(EngineContext& ctx, std::size_t n);
TheoremVerdict engine_convergence(EngineContext& ctx, ConvergenceVariant variant);

TheoremVerdict engine_main_everywhere(const Operator& t, const EngineOptions& o = {});
TheoremVerdict engine_main_irreducible(const Operator& t, const EngineOptions& o = {});
TheoremVerdict engine_lattice_homomorphism(const Operator& t, const EngineOptions& o = {});
TheoremVerdict engine_dominates_identity(const Operator& t, const EngineOptions& o = {});
TheoremVerdict engine_power_domination(const Operator& t, std::size_t n,
                                       const EngineOptions& o = {});
TheoremVerdict engine_convergence(const Operator& t, ConvergenceVariant variant,
                                  const EngineOptions& o = {});

nlohmann::json verdict_to_json(const TheoremVerdict& v);
nlohmann::json spectrum_to_json(const Spectrum& s);
nlohmann::json complex_to_json(Complex z);

struct AnalysisReport {
  nlohmann::json json;
  std::vector<TheoremVerdict> verdicts;

  bool soundness_violation() const;
};

/// Runs every engine plus the spectrum, structure summary and convergence
/// empirics. Deterministic for fixed options. SolverFailure propagates.
AnalysisReport analyze(const Operator& t, const EngineOptions& options = {});

}  // namespace posop

#endif  // POSOP_VERDICTS_HPP
