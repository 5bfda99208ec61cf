#ifndef QGAMBLE_SDP_HPP
#define QGAMBLE_SDP_HPP

#include <vector>

#include "qgamble/hermitian.hpp"
#include "qgamble/linprog.hpp"  // SolveStatus

namespace qgamble {

/// Block-diagonal SDP in primal standard form:
///   min  sum_b <C_b, X_b>
///   s.t. sum_b <A_{i,b}, X_b> = rhs_i   (i = 1..m)
///        X_b PSD (psd blocks) / diagonal with nonnegative entries
///        (nonneg-diagonal blocks).
/// All matrices are given as HermitianMatrix; on nonneg-diagonal blocks the
/// data must be diagonal. Complex psd blocks are handled internally through
/// the real [[Re, -Im], [Im, Re]] embedding.
struct SemidefiniteProgram {
  enum class BlockKind { Psd, NonnegDiagonal };
  struct Block {
    BlockKind kind = BlockKind::Psd;
    int dim = 0;
  };
  struct Constraint {
    std::vector<HermitianMatrix> a;  // one entry per block
    double rhs = 0.0;
  };

  std::vector<Block> blocks;
  std::vector<HermitianMatrix> objective;  // one entry per block
  std::vector<Constraint> constraints;

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  int num_constraints() const { return static_cast<int>(constraints.size()); }
};

struct SdpReport {
  SolveStatus status = SolveStatus::NumericalFailure;
  std::vector<HermitianMatrix> x;  // primal blocks
  std::vector<double> y;           // constraint duals
  std::vector<HermitianMatrix> s;  // dual slack blocks
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;  // |primal - dual|
  int iterations = 0;
  // history of (primal objective, dual objective, primal/dual infeasibility)
  // per iteration, for weak-duality diagnostics
  struct IterStat { double pobj, dobj, pinf, dinf; };
  std::vector<IterStat> history;
  // Infeasible: y_farkas with sum_i y_i A_i negative semidefinite on every
  // block and b.y = 1; residuals verified before the status is reported.
  std::vector<double> farkas_y;
  // Unbounded: normalized improving ray (A(ray) ~ 0, ray PSD, <C, ray> < 0).
  std::vector<HermitianMatrix> ray;
};

/// Primal-dual path following with Nesterov-Todd scaling, step fraction 0.98
/// to the cone boundary, at most 200 iterations. Infeasibility is decided by
/// an auxiliary feasibility phase whose Farkas certificate is re-verified;
/// a failed verification yields NumericalFailure, never a guessed verdict.
SdpReport solve_sdp(const SemidefiniteProgram& p);

/// Per-thread toggle for line-oriented solver traces on stderr; the guard
/// restores the previous setting when it leaves scope.
class SolverTraceGuard {
 public:
  explicit SolverTraceGuard(bool enable);
  ~SolverTraceGuard();
  SolverTraceGuard(const SolverTraceGuard&) = delete;
  SolverTraceGuard& operator=(const SolverTraceGuard&) = delete;

 private:
  bool previous_;
};

bool solver_trace_enabled();

}  // namespace qgamble

#endif
