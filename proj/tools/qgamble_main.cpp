#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgamble/errors.hpp"
#include "qgamble/scenario.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitSolver = 4;

struct Invocation {
  std::string group;
  std::string sub;
  std::string file;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coherence and prevision calculus for gambling-based probability theories"};
  app.require_subcommand(1);

  qgamble::ScenarioOptions opts;
  std::uint64_t seed_flag = 0;
  auto* seed_opt = app.add_option("--seed", seed_flag, "override the scenario / env seed");
  app.add_option("--threads", opts.threads, "worker threads for restart searches")
      ->check(CLI::PositiveNumber);
  double tol_flag = 0.0;
  auto* tol_opt = app.add_option("--tol", tol_flag, "override verdict tolerances");
  app.add_flag("--verbose", opts.verbose, "emit solver traces on stderr");

  Invocation inv;

  auto add_leaf = [&](CLI::App* parent, const std::string& group, const std::string& sub) {
    CLI::App* cmd = parent->add_subcommand(sub.empty() ? group : sub);
    cmd->add_option("file", inv.file, "scenario file")->required();
    cmd->callback([&inv, group, sub]() {
      inv.group = group;
      inv.sub = sub;
    });
  };

  auto* coherence = app.add_subcommand("coherence", "Dutch-book coherence checks");
  coherence->require_subcommand(1);
  add_leaf(coherence, "coherence", "classical");
  add_leaf(coherence, "coherence", "quantum");

  auto* prevision = app.add_subcommand("prevision", "lower/upper prevision queries");
  prevision->require_subcommand(1);
  add_leaf(prevision, "prevision", "classical");
  add_leaf(prevision, "prevision", "quantum");

  add_leaf(&app, "witness", "");
  add_leaf(&app, "chsh", "");
  add_leaf(&app, "quasifit", "");
  add_leaf(&app, "condition", "");
  add_leaf(&app, "evolve", "");

  auto* sos = app.add_subcommand("sos", "sum-of-squares and moment-matrix analyses");
  sos->require_subcommand(1);
  auto* motzkin = sos->add_subcommand("motzkin", "canonical non-SOS suite");
  motzkin->callback([&inv]() {
    inv.group = "sos";
    inv.sub = "motzkin";
  });
  add_leaf(sos, "sos", "gram");
  add_leaf(sos, "sos", "eval");

  CLI11_PARSE(app, argc, argv);

  if (*seed_opt) {
    opts.seed = seed_flag;
    opts.seed_overridden = true;
  }
  if (*tol_opt) opts.tol = tol_flag;

  try {
    std::cout << qgamble::run_command(inv.group, inv.sub, inv.file, opts);
    return 0;
  } catch (const nlohmann::json::parse_error& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitParse;
  } catch (const qgamble::ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kExitValidation;
  } catch (const qgamble::SolverFailure& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
}
