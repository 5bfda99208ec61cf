#ifndef QGAMBLE_QUANTUM_HPP
#define QGAMBLE_QUANTUM_HPP

#include <memory>
#include <optional>
#include <vector>

#include "qgamble/hermitian.hpp"
#include "qgamble/sdp.hpp"

namespace qgamble {

/// Subsystem layout of a composite system: m factors of dimension n_j >= 2.
struct SystemShape {
  std::vector<int> dims;

  SystemShape() = default;
  SystemShape(std::initializer_list<int> d);
  explicit SystemShape(std::vector<int> d);

  int factors() const { return static_cast<int>(dims.size()); }
  int total_dim() const;
  bool operator==(const SystemShape& o) const { return dims == o.dims; }
};

/// Gamble on product states: payoff (x_1 (x) ... (x) x_m)^dag G (x_1 ... x_m).
struct HermitianGamble {
  SystemShape shape;
  HermitianMatrix g;

  HermitianGamble(SystemShape s, HermitianMatrix m);
  double payoff(const ProductState& x) const { return qform(g, x); }
};

/// PSD, unit-trace matrix; the dual state object of a maximal P-coherent set.
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianMatrix rho);
  const HermitianMatrix& matrix() const { return rho_; }
  int dim() const { return rho_.dim(); }

 private:
  HermitianMatrix rho_;
};

/// Complete family of orthogonal projectors (sum = identity).
class ProjectiveMeasurement {
 public:
  explicit ProjectiveMeasurement(std::vector<HermitianMatrix> projectors);
  const std::vector<HermitianMatrix>& projectors() const { return projectors_; }
  int outcomes() const { return static_cast<int>(projectors_.size()); }

 private:
  std::vector<HermitianMatrix> projectors_;
};

/// Dense complex square matrix; carries unitaries, which are not Hermitian.
struct ComplexMatrix {
  int dim = 0;
  std::vector<Complex> entries;  // row-major

  ComplexMatrix(int d, std::vector<Complex> e);
  Complex operator()(int i, int j) const { return entries[static_cast<size_t>(i) * dim + j]; }
};

/// Finite list of Hermitian gambles sharing one shape. P-coherence is
/// computed lazily and cached; copies share the cache.
class QuantumAssessmentSet {
 public:
  QuantumAssessmentSet(SystemShape shape, std::vector<HermitianGamble> gambles);

  const SystemShape& shape() const { return shape_; }
  const std::vector<HermitianGamble>& gambles() const { return gambles_; }
  int count() const { return static_cast<int>(gambles_.size()); }

 private:
  struct Cache;
  friend bool is_p_coherent(const QuantumAssessmentSet&, struct IncoherenceCertificate*);
  friend DensityMatrix dual_state(const QuantumAssessmentSet&);
  SystemShape shape_;
  std::vector<HermitianGamble> gambles_;
  std::shared_ptr<Cache> cache_;
};

enum class SigmaClass { PNonnegative, PNegative, IndefiniteRegion };

const char* to_string(SigmaClass c);

/// Cone membership of the coefficient matrix: PSD -> tautology cone,
/// ND (strictly) -> contradiction cone, otherwise the indefinite region
/// where the restricted theory stays silent.
SigmaClass sigma_class(const HermitianGamble& g, double tol);
SigmaClass sigma_class(const HermitianGamble& g);

/// Witness of P-incoherence: -I = sum_i lambda_i G_i + remainder with
/// lambda >= 0 and remainder PSD.
struct IncoherenceCertificate {
  std::vector<double> lambda;
  HermitianMatrix remainder;

  IncoherenceCertificate() : remainder(1) {}
};

/// SDP margin test: incoherent iff no density matrix gives every assessed
/// gamble nonnegative expectation; the certificate is extracted from the
/// dual solution and re-verified before being returned.
bool is_p_coherent(const QuantumAssessmentSet& a, IncoherenceCertificate* cert = nullptr);

/// One density matrix in the dual set (Tr(G_i rho) >= -1e-9 for all i).
/// Throws IncoherentError when the dual is empty.
DensityMatrix dual_state(const QuantumAssessmentSet& a);

struct PrevisionReport {
  double value = 0.0;            // optimal gamma_0
  std::vector<double> lambda;    // multipliers on the assessments
  std::optional<DensityMatrix> dual_rho;
  double primal_value = 0.0;     // inf Tr(F rho) side
  double dual_value = 0.0;       // sup gamma_0 side
  double gap = 0.0;
  int iterations = 0;
};

/// sup gamma s.t. F - gamma I - sum lambda_i G_i is PSD, lambda >= 0.
/// The primal/dual agreement within 1e-7 is checked and a violation throws
/// SolverFailure. Throws IncoherentError on P-incoherent input.
PrevisionReport lower_prevision_report(const QuantumAssessmentSet& a, const HermitianGamble& f);
double lower_prevision_sdp(const QuantumAssessmentSet& a, const HermitianGamble& f);
double upper_prevision_sdp(const QuantumAssessmentSet& a, const HermitianGamble& f);

/// p_i = Tr(Pi_i rho).
std::vector<double> born_probabilities(const DensityMatrix& rho, const ProjectiveMeasurement& mmt);

/// State update after observing the projector: Pi rho Pi / Tr(Pi rho Pi).
/// Throws ValidationError when the conditioning probability is below 1e-12.
DensityMatrix luder_condition(const DensityMatrix& rho, const HermitianMatrix& projector);

/// rho -> U rho U^dag; U must be unitary within 1e-9.
DensityMatrix unitary_evolve(const DensityMatrix& rho, const ComplexMatrix& u);

/// Assessments that pin `rho` exactly: for every element E_k of a Hermitian
/// basis, the pair +-(E_k - Tr(E_k rho) I). The only density matrix giving
/// all of them nonnegative expectation is rho itself.
QuantumAssessmentSet pinning_assessments(const DensityMatrix& rho, const SystemShape& shape);

}  // namespace qgamble

#endif
