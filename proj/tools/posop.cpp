// posop: command-line front end.
//
// Exit codes: 0 success, 1 I/O, parse, argument or solver failure,
// 2 soundness violation (hypotheses pass, conclusion fails). A soundness
// violation also writes a reproduction file with the offending operator.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "posop/campaign.hpp"
#include "posop/errors.hpp"
#include "posop/gallery.hpp"
#include "posop/matrix_io.hpp"
#include "posop/spectral.hpp"
#include "posop/verdicts.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUnsound = 2;

struct EngineFlags {
  double tol_eig = posop::kEigenTol;
  double tol_support = -1.0;
  std::size_t horizon = 0;
  std::size_t k_max = 5000;
  std::uint64_t seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--tol-eig", tol_eig, "eigenvalue clustering tolerance")
        ->capture_default_str();
    app->add_option("--tol-support", tol_support,
                    "absolute entry threshold for supports (<0: relative default)")
        ->capture_default_str();
    app->add_option("--horizon", horizon, "expansion horizon (0: 2*dim)")->capture_default_str();
    app->add_option("--kmax", k_max, "power iteration cap")->capture_default_str();
    app->add_option("--seed", seed, "seed for sampled checks")->capture_default_str();
  }

  posop::EngineOptions options() const {
    posop::EngineOptions o;
    o.tol_eig = tol_eig;
    o.tol_support = tol_support;
    o.horizon = horizon;
    o.k_max = k_max;
    o.seed = seed;
    return o;
  }
};

void print_json(const json& doc) { std::cout << doc.dump(2) << '\n'; }

std::filesystem::path write_repro(const std::string& dir, const std::string& stem,
                                  const json& doc) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / (stem + ".json");
  std::ofstream out(path);
  if (!out) throw posop::Error("cannot write reproduction file " + path.string());
  out << doc.dump(2) << '\n';
  return path;
}

void report_solver_failure(const posop::SolverFailure& e, const std::string& label) {
  json partial = json::array();
  for (auto z : e.partial()) partial.push_back(posop::complex_to_json(z));
  print_json(json{{"label", label},
                  {"error", "SolverFailure"},
                  {"message", e.what()},
                  {"partial_eigenvalues", std::move(partial)}});
  std::cerr << "posop: " << e.what() << '\n';
}

int cmd_analyze(const std::string& path, const EngineFlags& flags, const std::string& repro_dir) {
  const posop::Operator t = posop::load_operator(path);
  try {
    const posop::AnalysisReport report = posop::analyze(t, flags.options());
    print_json(report.json);
    if (report.soundness_violation()) {
      const auto file = write_repro(repro_dir, "analyze-" + t.label(),
                                    json{{"operator", posop::operator_to_json(t)},
                                         {"report", report.json}});
      std::cerr << "posop: soundness violation, reproduction written to " << file << '\n';
      return kExitUnsound;
    }
  } catch (const posop::SolverFailure& e) {
    report_solver_failure(e, t.label());
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_spectrum(const std::string& path, const EngineFlags& flags, bool csv) {
  const posop::Operator t = posop::load_operator(path);
  try {
    const posop::Spectrum s = posop::eigenvalues(t, flags.tol_eig);
    if (csv) {
      std::printf("re,im,mult,residual\n");
      for (const auto& e : s.eigenvalues) {
        std::printf("%.17g,%.17g,%zu,%.17g\n", e.value.real(), e.value.imag(), e.multiplicity,
                    e.residual);
      }
    } else {
      print_json(json{{"label", t.label()},
                      {"spr", s.spr},
                      {"spectrum", posop::spectrum_to_json(s)}});
    }
  } catch (const posop::SolverFailure& e) {
    report_solver_failure(e, t.label());
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_gallery_list() {
  for (const auto& name : posop::scenario_names()) {
    std::cout << name << '\t' << posop::scenario_description(name) << '\n';
  }
  return kExitOk;
}

int cmd_gallery_run(const std::string& name, const std::vector<std::string>& tokens,
                    bool as_json, const std::string& repro_dir) {
  const posop::Scenario scenario = posop::build_scenario(name, posop::parse_overrides(tokens));
  const posop::ScenarioRun run = posop::run_scenario(scenario);
  if (as_json) {
    print_json(posop::scenario_run_to_json(run));
  } else {
    std::cout << "scenario " << run.name << ' ' << run.parameters.dump() << '\n';
    for (const auto& o : run.outcomes) {
      std::cout << (o.passed ? "PASS " : "FAIL ") << o.name << "  " << o.measured.dump() << '\n';
    }
  }
  for (const auto& o : run.outcomes) {
    if (o.name == "analysis_sound" && !o.passed) {
      const auto file = write_repro(repro_dir, "gallery-" + name,
                                    json{{"operator", posop::operator_to_json(scenario.op)},
                                         {"run", posop::scenario_run_to_json(run)}});
      std::cerr << "posop: soundness violation, reproduction written to " << file << '\n';
      return kExitUnsound;
    }
  }
  return run.all_passed ? kExitOk : kExitFailure;
}

int cmd_campaign(posop::CampaignConfig config, const std::string& generator,
                 const std::string& repro_dir) {
  config.generator.kind = posop::generator_from_string(generator);
  const posop::CampaignSummary summary = posop::run_campaign(config);
  print_json(posop::campaign_summary_to_json(summary, config));
  if (summary.violations.empty()) return kExitOk;
  for (const auto& v : summary.violations) {
    write_repro(repro_dir,
                "campaign-" + std::to_string(v.index) + "-" + v.theorem_id,
                json{{"seed", v.seed}, {"operator", v.op}, {"verdict", v.verdict}});
  }
  std::cerr << "posop: " << summary.violations.size()
            << " soundness violation(s), reproductions written to " << repro_dir << '\n';
  return kExitUnsound;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"posop: spectral analysis of positive operators on finite grids"};
  app.require_subcommand(1);
  std::string repro_dir = "posop-repro";
  app.add_option("--repro-dir", repro_dir, "directory for soundness reproduction files")
      ->capture_default_str();

  EngineFlags flags;

  std::string analyze_path;
  auto* analyze = app.add_subcommand("analyze", "run every engine and print the JSON report");
  analyze->add_option("file", analyze_path, "matrix file (JSON or whitespace text)")
      ->required();
  flags.attach(analyze);

  std::string spectrum_path;
  bool csv = false;
  auto* spectrum = app.add_subcommand("spectrum", "print eigenvalues with multiplicities");
  spectrum->add_option("file", spectrum_path, "matrix file")->required();
  spectrum->add_flag("--csv", csv, "CSV with header re,im,mult,residual");
  spectrum->add_flag("--json", [&csv](std::int64_t) { csv = false; }, "JSON output (default)");
  spectrum->add_option("--tol-eig", flags.tol_eig, "eigenvalue clustering tolerance")
      ->capture_default_str();

  auto* gallery = app.add_subcommand("gallery", "worked examples");
  gallery->require_subcommand(1);
  auto* gallery_list = gallery->add_subcommand("list", "list scenarios");
  std::string scenario;
  std::vector<std::string> overrides;
  bool gallery_json = false;
  auto* gallery_run = gallery->add_subcommand("run", "run a scenario and its assertions");
  gallery_run->add_option("name", scenario, "scenario name")->required();
  gallery_run->add_option("overrides", overrides, "key=value parameter overrides");
  gallery_run->add_flag("--json", gallery_json, "JSON output");

  posop::CampaignConfig config;
  config.count = 100;
  config.dim_min = 1;
  config.dim_max = 12;
  config.seed = 42;
  config.jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string generator = "StochasticPositiveDiag";
  auto* campaign = app.add_subcommand("campaign", "seeded random soundness campaign");
  campaign->add_option("--generator", generator, "generator kind")
      ->check(CLI::IsMember({"StochasticPositiveDiag", "IrreducibleOneDiag", "DominatesId",
                             "PowerDomination", "Unconstrained"}))
      ->capture_default_str();
  campaign->add_option("--count", config.count, "number of instances")->capture_default_str();
  campaign->add_option("--dim-min", config.dim_min, "smallest dimension")->capture_default_str();
  campaign->add_option("--dim-max", config.dim_max, "largest dimension")->capture_default_str();
  campaign->add_option("--epsilon", config.generator.epsilon, "domination constant")
      ->capture_default_str();
  campaign->add_option("--n", config.generator.n, "domination power")->capture_default_str();
  campaign->add_option("--seed", config.seed, "campaign seed")->capture_default_str();
  campaign->add_option("--jobs", config.jobs, "worker threads")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return cmd_analyze(analyze_path, flags, repro_dir);
    if (*spectrum) return cmd_spectrum(spectrum_path, flags, csv);
    if (*gallery_list) return cmd_gallery_list();
    if (*gallery_run) return cmd_gallery_run(scenario, overrides, gallery_json, repro_dir);
    if (*campaign) return cmd_campaign(config, generator, repro_dir);
  } catch (const posop::Error& e) {
    std::cerr << "posop: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "posop: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
