#ifndef QGAMBLE_ERRORS_HPP
#define QGAMBLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qgamble {

// Bad or inconsistent input data (shape mismatches, non-finite entries,
// malformed scenarios). CLI maps this to exit code 3.
struct ValidationError : std::invalid_argument {
  explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A solver gave up (iteration cap, lost conditioning). Exit code 4.
struct SolverFailure : std::runtime_error {
  explicit SolverFailure(const std::string& msg) : std::runtime_error(msg) {}
};

// A prevision/extension query was made against an incoherent assessment set.
// Callers are expected to confront the attached Dutch book instead.
struct IncoherentError : std::runtime_error {
  explicit IncoherentError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qgamble

#endif
