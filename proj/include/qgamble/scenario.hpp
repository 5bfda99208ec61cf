#ifndef QGAMBLE_SCENARIO_HPP
#define QGAMBLE_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>

namespace qgamble {

struct ScenarioOptions {
  std::uint64_t seed = 12345;       // default; scenario file and --seed override
  bool seed_overridden = false;     // --seed beats the scenario file
  int threads = 1;
  bool verbose = false;             // solver traces on stderr
  std::optional<double> tol;        // overrides verdict thresholds where one applies
};

/// Executes one CLI command against a scenario file and returns the JSON
/// report. `group` is the subcommand (coherence, prevision, witness, chsh,
/// quasifit, condition, evolve, sos); `sub` refines it (classical/quantum
/// for the first two, motzkin/gram/eval for sos). Throws ValidationError
/// for malformed scenarios, SolverFailure for solver breakdowns; a verdict
/// of incoherence is part of the report, never an error.
std::string run_command(const std::string& group, const std::string& sub,
                        const std::string& file_path, const ScenarioOptions& opts);

}  // namespace qgamble

#endif
