#ifndef QGAMBLE_LINPROG_HPP
#define QGAMBLE_LINPROG_HPP

#include <limits>
#include <vector>

#include "qgamble/errors.hpp"

namespace qgamble {

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

const char* to_string(SolveStatus s);

/// Equality-constrained LP with per-variable bounds:
///   optimize c.x  subject to  A x = b,  lower <= x <= upper.
/// lower defaults to 0 and may be -inf; upper defaults to +inf.
struct LinearProgram {
  enum class Sense { Min, Max };

  Sense sense = Sense::Min;
  std::vector<double> objective;            // size n
  std::vector<std::vector<double>> eq_rows; // m rows of size n
  std::vector<double> rhs;                  // size m
  std::vector<double> lower;                // size n (or empty: all 0)
  std::vector<double> upper;                // size n (or empty: all +inf)

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(eq_rows.size()); }

  static constexpr double minus_inf = -std::numeric_limits<double>::infinity();
  static constexpr double plus_inf = std::numeric_limits<double>::infinity();
};

struct LpReport {
  SolveStatus status = SolveStatus::NumericalFailure;
  std::vector<double> x;       // primal solution in original variables
  std::vector<double> y;       // duals of the original equality rows
  double objective = 0.0;      // in the original sense
  double dual_objective = 0.0;
  double gap = 0.0;            // |objective - dual_objective|
  long iterations = 0;
  // Infeasible: y_farkas has one entry per original row and satisfies
  //   sum_i y_i * A[i][j] <= 0 for every nonneg column (== 0 for free ones)
  //   and y.b > 0; verified before the status is reported.
  std::vector<double> farkas;
  // Unbounded: improving direction in original variables (A ray = 0,
  // objective strictly improving along it).
  std::vector<double> ray;
};

/// Two-phase dense simplex with Bland's rule; pivot cap 1e6, after which
/// status is NumericalFailure.
LpReport solve_lp(const LinearProgram& p);

}  // namespace qgamble

#endif
