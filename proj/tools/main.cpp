#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

#include "reports.hpp"

namespace {

int exit_code(bratteli::ErrorCode code) {
  using bratteli::ErrorCode;
  switch (code) {
    case ErrorCode::io:
      return 3;
    case ErrorCode::precision_exhausted:
    case ErrorCode::cap_exceeded:
    case ErrorCode::ambiguous_rounding:
    case ErrorCode::rank_deficient:
    case ErrorCode::not_clean:
      return 4;
    default:
      return 2;
  }
}

void report_error(const std::string& code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = {{"code", code}, {"message", message}};
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  using bratteli::cli::RunConfig;
  RunConfig cfg;
  CLI::App app{"Ordered Bratteli-Vershik diagrams: dynamics, invariant measures and eigenvalue tests"};
  app.set_version_flag("--version", std::string(BRATTELI_VERSION));
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--precision", cfg.precision,
                 "Interval precision in bits (default: BRATTELI_PRECISION or 128)")
      ->check(CLI::Range(64L, 1L << 20));

  auto diagram_opt = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--diagram", cfg.diagram_path, "Diagram file (JSON)");
    if (required) o->required();
  };

  auto* inspect = app.add_subcommand("inspect", "Heights, products and properness of a diagram");
  diagram_opt(inspect, true);
  inspect->add_option("--depth", cfg.depth, "Levels to inspect (default: all)");
  inspect->add_option("--emit", cfg.emit, "json | text | dot")->check(CLI::IsMember({"json", "text", "dot"}));

  auto* orbit = app.add_subcommand("orbit", "Vershik orbit of a depth-n prefix");
  diagram_opt(orbit, true);
  orbit->add_option("--depth", cfg.depth, "Prefix depth (default: diagram depth)");
  orbit->add_option("--from", cfg.from, "min | max | INDEX (position in the tower-by-tower cycle)");
  orbit->add_option("--steps", cfg.steps, "Number of steps");
  orbit->add_option("--emit", cfg.emit, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  auto* measure = app.add_subcommand("measure", "Invariant measure candidates and ergodicity diagnostics");
  diagram_opt(measure, true);
  measure->add_option("--level", cfg.level, "Level m (default 1)");
  measure->add_option("--horizon", cfg.horizon, "Level N (default: diagram depth)");
  measure->add_option("--tol", cfg.tol, "Clustering and unique-ergodicity tolerance")->check(CLI::PositiveNumber);
  measure->add_option("--emit", cfg.emit, "json")->check(CLI::IsMember({"json"}));

  auto* spectra = app.add_subcommand("spectra", "Eigenvalue tests for a candidate alpha");
  diagram_opt(spectra, true);
  spectra->add_option("--alpha", cfg.alpha_text, "a/b, decimal, real:DIGITS, real:1/phi or real:phi");
  spectra->add_option("--test", cfg.test, "Test to run")
      ->required()
      ->check(CLI::IsMember({"necessary", "uniform", "stable", "subspaces", "dimgroup", "groupgeo", "eigengroup",
                             "martingale", "toeplitz"}));
  spectra->add_option("--level", cfg.level, "Level m / n0 / n_from");
  spectra->add_option("--horizon", cfg.horizon, "Horizon N / n_to");
  spectra->add_option("--tol", cfg.tol, "Tolerance")->check(CLI::PositiveNumber);
  spectra->add_option("--threshold", cfg.threshold, "Clean-set mass threshold")->check(CLI::PositiveNumber);
  spectra->add_option("--state", cfg.state_path, "Construction sidecar supplying alpha and epsilon_n");
  spectra->add_option("--z", cfg.z_text, "Rational vector a/b,c/d for dimgroup and eigengroup");
  spectra->add_option("--w", cfg.w_text, "Integer vectors 1,0;0,1 for eigengroup");
  spectra->add_option("--rho", cfg.rho_text, "Per-vertex phase exponents for martingale (omit to optimize)");
  spectra->add_flag("--bounded", cfg.bounded, "Treat the characteristic sequence as bounded (toeplitz)");
  spectra->add_option("--emit", cfg.emit, "json")->check(CLI::IsMember({"json"}));

  auto* construct = app.add_subcommand("construct", "Generate an example family");
  construct->add_option("--family", cfg.family, "section6 | toeplitz3 | toeplitz | fibonacci")
      ->required()
      ->check(CLI::IsMember({"section6", "toeplitz3", "toeplitz", "fibonacci"}));
  construct->add_option("--params", cfg.params_text, "Family parameters as JSON, or @FILE");
  construct->add_option("--depth", cfg.depth, "Number of levels");
  construct->add_option("--out", cfg.out_path, "Diagram file to write")->required();
  construct->add_option("--state", cfg.state_path, "Sidecar path (default: OUT.state.json)");
  construct->add_option("--emit", cfg.emit, "json")->check(CLI::IsMember({"json"}));

  auto* telescope = app.add_subcommand("telescope", "Contract a diagram along cut levels");
  diagram_opt(telescope, true);
  telescope->add_option("--cuts", cfg.cuts_text, "Cut levels, e.g. 0,2,4")->required();
  telescope->add_option("--out", cfg.out_path, "Diagram file to write (default: print it)");
  telescope->add_option("--emit", cfg.emit, "json report instead of the diagram")
      ->check(CLI::IsMember({"json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  if (cfg.emit.empty()) {
    cfg.emit = cfg.command == "orbit" ? "csv" : cfg.command == "telescope" ? "diagram" : "json";
  }

  try {
    return bratteli::cli::run(cfg, std::cout);
  } catch (const bratteli::Error& e) {
    report_error(bratteli::to_string(e.code()), e.what());
    return exit_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    report_error("parse", e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return 5;
  }
}
