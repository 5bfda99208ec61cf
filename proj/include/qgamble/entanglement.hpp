#ifndef QGAMBLE_ENTANGLEMENT_HPP
#define QGAMBLE_ENTANGLEMENT_HPP

#include <cstdint>
#include <vector>

#include "qgamble/quantum.hpp"

namespace qgamble {

constexpr int kDefaultSeesawRestarts = 256;
constexpr std::uint64_t kDefaultSeesawSeed = 12345;

/// Outcome of the alternating eigenvector ascent over product states.
/// `value` is attained by `state`, hence a sound lower bound on the true
/// supremum; `upper_bound` is the trivial lambda_max bound. An exact
/// efficient certificate cannot exist (the problem is NP-hard for two or
/// more factors), so callers treat value as best-found.
struct SeesawResult {
  double value = 0.0;
  ProductState state;
  double upper_bound = 0.0;
  std::vector<double> ascent;  // per-sweep values of the winning restart
  int winning_restart = -1;

  SeesawResult() : state({UnitVector({Complex(1, 0)})}) {}
};

/// Best product-state payoff of g over `restarts` seeded starts. For a
/// single factor this is the exact top eigenpair. Restarts use seeds derived
/// per index and reduce deterministically (best value, ties to the lowest
/// index), so any `threads` count gives bit-identical results.
SeesawResult product_state_max(const HermitianGamble& g, int restarts = kDefaultSeesawRestarts,
                               std::uint64_t rng_seed = kDefaultSeesawSeed, int threads = 1);

/// Dutch-book style witness verdict for the shifted gamble H - eps I:
/// desirable under rho (trace >= 0) yet negative on all sampled product
/// states.
struct WitnessReport {
  double trace_value = 0.0;   // Tr((H - eps I) rho)
  double product_max = 0.0;   // best found product payoff of H - eps I
  SeesawResult seesaw;        // on the unshifted H
  bool condition_holds = false;
  double epsilon = 0.0;
  // eps band (lo, hi] in which the strict condition holds: lo = best found
  // product max of H, hi = Tr(H rho)
  double epsilon_band_lo = 0.0;
  double epsilon_band_hi = 0.0;
};

/// verdict_tol sets the strictness band around zero for both sides of the
/// condition.
WitnessReport witness_check(const HermitianGamble& h, const DensityMatrix& rho, double epsilon,
                            int restarts = kDefaultSeesawRestarts,
                            std::uint64_t rng_seed = kDefaultSeesawSeed, int threads = 1,
                            double verdict_tol = 1e-9);

/// Peres-Horodecki test: negativity of the partial transpose on the second
/// factor. Exact for 2x2 and 2x3 systems; elsewhere a negative eigenvalue
/// still proves entanglement but a nonnegative spectrum is inconclusive.
struct PptReport {
  bool entangled = false;
  bool conclusive = false;
  double min_eigenvalue = 0.0;
};

PptReport ppt_check(const DensityMatrix& rho, const std::vector<int>& dims,
                    double tol = 1e-9);

/// Transpose of the second factor.
HermitianMatrix partial_transpose(const HermitianMatrix& a, const std::vector<int>& dims);

/// Entanglement witness from the negative PPT eigenvector:
/// W = (eta eta^dag)^{T2}. Verified in-op: Tr(rho W) < 0 and the see-saw on
/// -W finds no product state where W dips below -1e-6. Throws
/// ValidationError when ppt_check does not certify entanglement.
HermitianGamble witness_from_ppt(const DensityMatrix& rho, const std::vector<int>& dims,
                                 int restarts = kDefaultSeesawRestarts,
                                 std::uint64_t rng_seed = kDefaultSeesawSeed);

/// Polariser angles of the two-site correlation experiment.
struct ChshConfig {
  double alpha1 = M_PI / 2.0;
  double alpha2 = 0.0;
  double beta1 = M_PI / 4.0;
  double beta2 = -M_PI / 4.0;
};

/// S = G_a1 (x) (G_b1 - G_b2) + G_a2 (x) (G_b1 + G_b2) with
/// G_t = sin(t) sigma_x + cos(t) sigma_z, on two qubits.
HermitianGamble chsh_operator(const ChshConfig& c);

struct BellGapReport {
  double quantum_value = 0.0;    // Tr(S rho)
  double product_max = 0.0;      // see-saw over product states
  double algebraic_bound = 2.0;  // classical correlation bound
  double lambda_max = 0.0;       // vacuous restricted-theory bound
  SeesawResult seesaw;
};

/// The ordering product_max <= 2 and Tr(S rho) <= lambda_max is asserted;
/// a violation throws SolverFailure.
BellGapReport bell_gap_report(const ChshConfig& c, const DensityMatrix& rho,
                              int restarts = kDefaultSeesawRestarts,
                              std::uint64_t rng_seed = kDefaultSeesawSeed, int threads = 1);

}  // namespace qgamble

#endif
