#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "qgamble/scenario.hpp"

using namespace qgamble;
using nlohmann::json;

namespace {

const std::string kScenarios = std::string(QGAMBLE_SOURCE_DIR) + "/scenarios/";

json run_json(const std::string& group, const std::string& sub, const std::string& file) {
  ScenarioOptions opts;
  return json::parse(run_command(group, sub, file.empty() ? "" : kScenarios + file, opts));
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(QGAMBLE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("reports are byte-identical across runs") {
  ScenarioOptions opts;
  const std::pair<const char*, const char*> cases[] = {
      {"prevision classical", "coin_maximal.json"},
      {"prevision quantum", "rho_e_prevision.json"},
      {"witness", "witness_h.json"},
      {"chsh", "box2_chsh.json"},
      {"quasifit", "quasifit_rho_e.json"},
      {"sos motzkin", ""},
  };
  for (const auto& [cmd, file] : cases) {
    std::string group(cmd), sub;
    if (const auto sp = group.find(' '); sp != std::string::npos) {
      sub = group.substr(sp + 1);
      group = group.substr(0, sp);
    }
    const std::string path = file[0] ? kScenarios + file : "";
    const std::string a = run_command(group, sub, path, opts);
    const std::string b = run_command(group, sub, path, opts);
    CHECK(a == b);
    CHECK(!a.empty());
  }
  // multi-threaded see-saw reduction must not change a byte
  ScenarioOptions threaded;
  threaded.threads = 4;
  CHECK(run_command("chsh", "", kScenarios + "box2_chsh.json", opts) ==
        run_command("chsh", "", kScenarios + "box2_chsh.json", threaded));
}

TEST_CASE("coin scenarios reproduce the worked previsions") {
  const auto max = run_json("prevision", "classical", "coin_maximal.json");
  CHECK(max["lower_prevision"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(max["upper_prevision"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));

  const auto narrow = run_json("prevision", "classical", "coin_narrow.json");
  CHECK(narrow["lower_prevision"].get<double>() == doctest::Approx(1.0 / 11).epsilon(1e-12));
  CHECK(narrow["upper_prevision"].get<double>() == doctest::Approx(10.0 / 11).epsilon(1e-12));

  const auto bad = run_json("coherence", "classical", "coin_incoherent.json");
  CHECK_FALSE(bad["coherent"].get<bool>());
  CHECK(bad["dutch_book"]["max_payoff"].get<double>() < 0.0);
}

TEST_CASE("quantum scenarios") {
  const auto pinned = run_json("prevision", "quantum", "rho_e_prevision.json");
  CHECK(pinned["p_coherent"].get<bool>());
  CHECK(pinned["lower_prevision"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(pinned["upper_prevision"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(pinned["duality_gap"].get<double>() <= 1e-7);

  const auto vac = run_json("prevision", "quantum", "vacuous_witness_prevision.json");
  CHECK(vac["lower_prevision"].get<double>() == doctest::Approx(-3.0).epsilon(1e-7));
  CHECK(vac["upper_prevision"].get<double>() == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("witness and chsh scenarios") {
  const auto w = run_json("witness", "", "witness_h.json");
  CHECK(w["condition_holds"].get<bool>());
  CHECK(w["trace_value"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(w["product_max"].get<double>() == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(w["ppt"]["entangled"].get<bool>());
  CHECK(w["ppt"]["min_eigenvalue"].get<double>() == doctest::Approx(-0.5).epsilon(1e-9));

  const auto c = run_json("chsh", "", "box2_chsh.json");
  CHECK(c["quantum_value"].get<double>() == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
  CHECK(c["product_state_max"].get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(c["chain_holds"].get<bool>());
}

TEST_CASE("quasifit and analysis scenarios") {
  const auto fit = run_json("quasifit", "", "quasifit_rho_e.json");
  CHECK(fit["max_moment_error"].get<double>() <= 1e-7);
  CHECK(fit["min_weight"].get<double>() < -1e-3);
  CHECK(fit["weight_sum"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));

  const auto box1 = run_json("quasifit", "", "box1_analysis.json");
  CHECK(box1["max_moment_error"].get<double>() <= 0.01);
  CHECK(std::abs(box1["weight_sum"].get<double>() - 1.0) <= 1e-3);
}

TEST_CASE("conditioning and evolution scenarios") {
  const auto cond = run_json("condition", "", "condition_bell.json");
  CHECK(cond["probability"].get<double>() == doctest::Approx(0.5));
  CHECK(cond["state"][0][0][0].get<double>() == doctest::Approx(1.0));

  const auto ev = run_json("evolve", "", "evolve_flip.json");
  CHECK(ev["state"][1][1][0].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("sos scenarios") {
  const auto suite = run_json("sos", "motzkin", "");
  CHECK_FALSE(suite["sos_feasible"].get<bool>());
  CHECK(suite["moment_value_of_negated"].get<double>() == 31.0);
  CHECK(suite["grid_min"].get<double>() == doctest::Approx(26.0 / 27.0).epsilon(1e-3));
  CHECK(suite["z_min_eigenvalue_scaled"].get<double>() >= -1e-6);

  const auto gram = run_json("sos", "gram", "sos_gram_square.json");
  CHECK(gram["sos_feasible"].get<bool>());

  const auto eval = run_json("sos", "eval", "sos_eval_ze.json");
  CHECK(eval["value"].get<double>() == 31.0);
  CHECK(eval["z_is_psd"].get<bool>());
}

TEST_CASE("tolerance override changes the witness verdict band") {
  ScenarioOptions strict;
  strict.tol = 10.0;  // wider than any value in the scenario: nothing holds
  const auto report =
      json::parse(run_command("witness", "", kScenarios + "witness_h.json", strict));
  CHECK_FALSE(report["condition_holds"].get<bool>());
  CHECK_FALSE(report["ppt"]["entangled"].get<bool>());
}

TEST_CASE("quantum coherence scenarios") {
  const auto bad = run_json("coherence", "quantum", "p_incoherent_falsum.json");
  CHECK_FALSE(bad["p_coherent"].get<bool>());
  CHECK(bad["certificate"]["lambda"][0].get<double>() == doctest::Approx(0.5).epsilon(1e-6));

  const auto good = run_json("coherence", "quantum", "p_coherent_negated_witness.json");
  CHECK(good["p_coherent"].get<bool>());
  CHECK(good.contains("dual_state"));
}

TEST_CASE("every shipped scenario completes well under its time budget") {
  const std::pair<std::string, std::string> runs[] = {
      {"coherence classical", "coin_incoherent.json"},
      {"coherence quantum", "p_incoherent_falsum.json"},
      {"coherence quantum", "p_coherent_negated_witness.json"},
      {"prevision classical", "coin_maximal.json"},
      {"prevision classical", "coin_narrow.json"},
      {"prevision quantum", "rho_e_prevision.json"},
      {"prevision quantum", "vacuous_witness_prevision.json"},
      {"witness ", "witness_h.json"},
      {"chsh ", "box2_chsh.json"},
      {"quasifit ", "quasifit_rho_e.json"},
      {"quasifit ", "box1_analysis.json"},
      {"condition ", "condition_bell.json"},
      {"evolve ", "evolve_flip.json"},
      {"sos gram", "sos_gram_square.json"},
      {"sos eval", "sos_eval_ze.json"},
  };
  for (const auto& [cmd, file] : runs) {
    std::string group = cmd.substr(0, cmd.find(' '));
    std::string sub = cmd.find(' ') == std::string::npos ? "" : cmd.substr(cmd.find(' ') + 1);
    ScenarioOptions opts;
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = run_command(group, sub, kScenarios + file, opts);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(!out.empty());
    CHECK(secs < 10.0);
  }
}

TEST_CASE("binary exit codes") {
  // verdicts never drive exit codes
  CHECK(run_binary("coherence classical " + kScenarios + "coin_incoherent.json") == 0);
  CHECK(run_binary("sos motzkin") == 0);

  // parse error
  const std::string bad_json = std::string(QGAMBLE_BINARY_DIR) + "/bad.json";
  {
    std::ofstream out(bad_json);
    out << "{ not json";
  }
  CHECK(run_binary("witness " + bad_json) == 2);

  // validation error: non-Hermitian query matrix
  const std::string bad_matrix = std::string(QGAMBLE_BINARY_DIR) + "/bad_matrix.json";
  {
    std::ofstream out(bad_matrix);
    out << R"({"kind":"quantum","shape":[2],"assessments":[],"query":[[0,1],[0,0]]})";
  }
  CHECK(run_binary("prevision quantum " + bad_matrix) == 3);

  // missing file also counts as a validation problem
  CHECK(run_binary("witness /nonexistent/path.json") == 3);
}
