#include "qgamble/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace qgamble {

SystemShape::SystemShape(std::initializer_list<int> d) : dims(d) {
  if (dims.empty()) throw ValidationError("system shape needs at least one factor");
  for (int n : dims)
    if (n < 2) throw ValidationError("every subsystem dimension must be >= 2");
}

SystemShape::SystemShape(std::vector<int> d) : dims(std::move(d)) {
  if (dims.empty()) throw ValidationError("system shape needs at least one factor");
  for (int n : dims)
    if (n < 2) throw ValidationError("every subsystem dimension must be >= 2");
}

int SystemShape::total_dim() const {
  int t = 1;
  for (int n : dims) t *= n;
  return t;
}

HermitianGamble::HermitianGamble(SystemShape s, HermitianMatrix m)
    : shape(std::move(s)), g(std::move(m)) {
  if (g.dim() != shape.total_dim())
    throw ValidationError("gamble matrix does not match the system shape");
}

DensityMatrix::DensityMatrix(HermitianMatrix rho) : rho_(std::move(rho)) {
  if (!is_psd(rho_, 1e-9)) throw ValidationError("density matrix must be PSD");
  if (std::abs(rho_.trace() - 1.0) > 1e-9)
    throw ValidationError("density matrix must have unit trace");
}

ProjectiveMeasurement::ProjectiveMeasurement(std::vector<HermitianMatrix> projectors)
    : projectors_(std::move(projectors)) {
  if (projectors_.empty()) throw ValidationError("measurement needs at least one projector");
  const int n = projectors_.front().dim();
  HermitianMatrix sum(n);
  for (const auto& p : projectors_) {
    if (p.dim() != n) throw ValidationError("projector dimensions differ");
    // idempotence
    HermitianMatrix sq(n);
    {
      std::vector<Complex> data(static_cast<size_t>(n) * n, Complex(0, 0));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Complex acc(0, 0);
          for (int k = 0; k < n; ++k) acc += p(i, k) * p(k, j);
          data[static_cast<size_t>(i) * n + j] = acc;
        }
      sq = HermitianMatrix(n, std::move(data));
    }
    if ((sq - p).max_abs() > 1e-9) throw ValidationError("projector is not idempotent");
    sum = sum + p;
  }
  if ((sum - HermitianMatrix::identity(n)).max_abs() > 1e-9)
    throw ValidationError("projectors must sum to the identity");
  // pairwise orthogonality follows from idempotence + completeness, but a
  // cheap direct check catches non-Hermitian mistakes earlier
  for (size_t i = 0; i < projectors_.size(); ++i)
    for (size_t j = i + 1; j < projectors_.size(); ++j) {
      double dot = trace_product(projectors_[i], projectors_[j]);
      if (std::abs(dot) > 1e-9) throw ValidationError("projectors are not orthogonal");
    }
}

ComplexMatrix::ComplexMatrix(int d, std::vector<Complex> e) : dim(d), entries(std::move(e)) {
  if (d <= 0 || entries.size() != static_cast<size_t>(d) * d)
    throw ValidationError("complex matrix data does not match dimension");
  for (Complex z : entries)
    if (!is_finite(z)) throw ValidationError("complex matrix entries must be finite");
}

struct QuantumAssessmentSet::Cache {
  std::mutex mutex;
  std::optional<bool> coherent;
  IncoherenceCertificate cert;
  std::optional<HermitianMatrix> dual_rho;
};

QuantumAssessmentSet::QuantumAssessmentSet(SystemShape shape, std::vector<HermitianGamble> gambles)
    : shape_(std::move(shape)), gambles_(std::move(gambles)), cache_(std::make_shared<Cache>()) {
  for (const auto& g : gambles_)
    if (!(g.shape == shape_)) throw ValidationError("assessed gambles must share one shape");
}

const char* to_string(SigmaClass c) {
  switch (c) {
    case SigmaClass::PNonnegative: return "p-nonnegative";
    case SigmaClass::PNegative: return "p-negative";
    case SigmaClass::IndefiniteRegion: return "indefinite-region";
  }
  return "unknown";
}

SigmaClass sigma_class(const HermitianGamble& g, double tol) {
  if (is_psd(g.g, tol)) return SigmaClass::PNonnegative;
  if (is_nd(g.g, tol)) return SigmaClass::PNegative;
  return SigmaClass::IndefiniteRegion;
}

SigmaClass sigma_class(const HermitianGamble& g) {
  if (is_psd(g.g)) return SigmaClass::PNonnegative;
  if (is_nd(g.g)) return SigmaClass::PNegative;
  return SigmaClass::IndefiniteRegion;
}

namespace {

// Margin problem: max t s.t. Tr(rho) = 1, Tr(G_i rho) >= t, rho PSD.
// Coherent iff t* >= 0 (the dual set is exactly the feasible rho at t = 0);
// the dual solution of an incoherent instance carries the lambda certificate.
struct MarginResult {
  double t_star = 0.0;
  HermitianMatrix rho;
  std::vector<double> lambda;

  MarginResult() : rho(1) {}
};

MarginResult solve_margin(const QuantumAssessmentSet& a) {
  const int n = a.shape().total_dim();
  const int k = a.count();

  // The margin is bounded below by -max ||G_i||_2, so t = u - shift with a
  // single nonnegative u keeps the optimal face bounded (a free split t+ - t-
  // would leave an unbounded direction that stalls the interior point run).
  double shift = 1.0;
  for (const auto& g : a.gambles()) {
    const auto ed = eigh(g.g);
    shift = std::max({shift, std::abs(ed.eigenvalues.front()) + 1.0,
                      std::abs(ed.eigenvalues.back()) + 1.0});
  }

  SemidefiniteProgram p;
  p.blocks.push_back({SemidefiniteProgram::BlockKind::Psd, n});
  p.blocks.push_back({SemidefiniteProgram::BlockKind::NonnegDiagonal, k});
  p.blocks.push_back({SemidefiniteProgram::BlockKind::NonnegDiagonal, 1});  // u = t + shift

  p.objective.push_back(HermitianMatrix(n));
  p.objective.push_back(HermitianMatrix(k));
  p.objective.push_back(HermitianMatrix::diagonal({-1.0}));  // min -u

  {
    SemidefiniteProgram::Constraint trace_row;
    trace_row.a = {HermitianMatrix::identity(n), HermitianMatrix(k), HermitianMatrix(1)};
    trace_row.rhs = 1.0;
    p.constraints.push_back(std::move(trace_row));
  }
  for (int i = 0; i < k; ++i) {
    std::vector<double> slack(static_cast<size_t>(k), 0.0);
    slack[static_cast<size_t>(i)] = -1.0;
    SemidefiniteProgram::Constraint row;
    row.a = {a.gambles()[static_cast<size_t>(i)].g, HermitianMatrix::diagonal(slack),
             HermitianMatrix::diagonal({-1.0})};
    row.rhs = -shift;
    p.constraints.push_back(std::move(row));
  }

  const SdpReport r = solve_sdp(p);
  if (r.status != SolveStatus::Optimal)
    throw SolverFailure("P-coherence margin SDP did not solve");

  MarginResult out;
  out.t_star = -r.primal_objective - shift;
  out.rho = r.x[0];
  // dual at an incoherent optimum: sum_i y_i = 1, y_0 = -t* > 0, and
  // y_0 I + sum y_i G_i is NSD, so lambda_i = y_i / (-t*) witnesses -1 in
  // the generated cone.
  out.lambda.assign(r.y.begin() + 1, r.y.end());
  return out;
}

}  // namespace

bool is_p_coherent(const QuantumAssessmentSet& a, IncoherenceCertificate* cert) {
  auto& cache = *a.cache_;
  std::lock_guard<std::mutex> lock(cache.mutex);
  if (!cache.coherent.has_value()) {
    if (a.count() == 0) {
      cache.coherent = true;
      cache.dual_rho = HermitianMatrix::identity(a.shape().total_dim()) *
                       (1.0 / a.shape().total_dim());
    } else {
      const MarginResult mr = solve_margin(a);
      if (mr.t_star >= -1e-9) {
        cache.coherent = true;
        cache.dual_rho = mr.rho;
      } else {
        cache.coherent = false;
        const double c = -mr.t_star;  // y_0 = t* < 0, normalize by -y_0 > 0
        IncoherenceCertificate ic;
        ic.lambda = mr.lambda;
        for (double& l : ic.lambda) l = std::max(l / c, 0.0);
        const int n = a.shape().total_dim();
        HermitianMatrix rem = -HermitianMatrix::identity(n);
        for (int i = 0; i < a.count(); ++i)
          rem = rem - a.gambles()[static_cast<size_t>(i)].g * ic.lambda[static_cast<size_t>(i)];
        if (!is_psd(rem, 1e-6 * std::max(1.0, rem.max_abs())))
          throw SolverFailure("incoherence certificate failed verification");
        ic.remainder = rem;
        cache.cert = std::move(ic);
      }
    }
  }
  if (!*cache.coherent && cert) *cert = cache.cert;
  return *cache.coherent;
}

DensityMatrix dual_state(const QuantumAssessmentSet& a) {
  if (!is_p_coherent(a)) throw IncoherentError("P-incoherent assessment set: dual is empty");
  auto& cache = *a.cache_;
  std::lock_guard<std::mutex> lock(cache.mutex);
  HermitianMatrix rho = *cache.dual_rho;
  // clean up solver round-off before the DensityMatrix validation
  rho = rho * (1.0 / rho.trace());
  DensityMatrix dm(rho);
  for (const auto& g : a.gambles())
    if (trace_product(g.g, rho) < -1e-7 * std::max(1.0, g.g.max_abs()))
      throw SolverFailure("dual state failed the expectation check");
  return dm;
}

namespace {

struct PairedAssessments {
  std::vector<int> unpaired;              // indices with a slack variable
  std::vector<std::pair<int, int>> pairs; // (i, j) with G_i = -G_j: equality rows
};

PairedAssessments find_pairs(const QuantumAssessmentSet& a) {
  PairedAssessments out;
  const int k = a.count();
  std::vector<bool> used(static_cast<size_t>(k), false);
  for (int i = 0; i < k; ++i) {
    if (used[static_cast<size_t>(i)]) continue;
    const auto& gi = a.gambles()[static_cast<size_t>(i)].g;
    int partner = -1;
    for (int j = i + 1; j < k && partner < 0; ++j) {
      if (used[static_cast<size_t>(j)]) continue;
      const auto& gj = a.gambles()[static_cast<size_t>(j)].g;
      if ((gi + gj).max_abs() <= 1e-12 * std::max(1.0, gi.max_abs())) partner = j;
    }
    if (partner >= 0) {
      used[static_cast<size_t>(i)] = used[static_cast<size_t>(partner)] = true;
      out.pairs.emplace_back(i, partner);
    } else {
      used[static_cast<size_t>(i)] = true;
      out.unpaired.push_back(i);
    }
  }
  return out;
}

}  // namespace

PrevisionReport lower_prevision_report(const QuantumAssessmentSet& a, const HermitianGamble& f) {
  if (!(f.shape == a.shape())) throw ValidationError("query gamble shape mismatch");
  if (!is_p_coherent(a)) throw IncoherentError("P-incoherent assessment set");

  const int n = a.shape().total_dim();
  const int k = a.count();
  // +-paired assessments turn into equality rows without slack; this keeps
  // exactly-pinned states well posed.
  const PairedAssessments pa = find_pairs(a);
  const int nu = static_cast<int>(pa.unpaired.size());

  SemidefiniteProgram p;
  p.blocks.push_back({SemidefiniteProgram::BlockKind::Psd, n});
  const bool has_slack = nu > 0;
  if (has_slack) p.blocks.push_back({SemidefiniteProgram::BlockKind::NonnegDiagonal, nu});

  p.objective.push_back(f.g);
  if (has_slack) p.objective.push_back(HermitianMatrix(nu));

  auto make_row = [&](const HermitianMatrix& g, int slack_idx, double rhs) {
    SemidefiniteProgram::Constraint row;
    row.a.push_back(g);
    if (has_slack) {
      std::vector<double> d(static_cast<size_t>(nu), 0.0);
      if (slack_idx >= 0) d[static_cast<size_t>(slack_idx)] = -1.0;
      row.a.push_back(HermitianMatrix::diagonal(d));
    }
    row.rhs = rhs;
    return row;
  };

  p.constraints.push_back(make_row(HermitianMatrix::identity(n), -1, 1.0));
  for (int u = 0; u < nu; ++u)
    p.constraints.push_back(
        make_row(a.gambles()[static_cast<size_t>(pa.unpaired[static_cast<size_t>(u)])].g, u, 0.0));
  for (const auto& [i, j] : pa.pairs)
    p.constraints.push_back(make_row(a.gambles()[static_cast<size_t>(i)].g, -1, 0.0));

  const SdpReport r = solve_sdp(p);
  if (r.status != SolveStatus::Optimal) throw SolverFailure("prevision SDP did not solve");

  PrevisionReport rep;
  rep.primal_value = r.primal_objective;
  rep.dual_value = r.dual_objective;
  rep.gap = r.gap;
  rep.iterations = r.iterations;
  rep.value = r.dual_objective;  // gamma_0
  if (rep.gap > 1e-7 * std::max(1.0, std::abs(rep.value)))
    throw SolverFailure("prevision strong-duality check failed");

  rep.lambda.assign(static_cast<size_t>(k), 0.0);
  for (int u = 0; u < nu; ++u)
    rep.lambda[static_cast<size_t>(pa.unpaired[static_cast<size_t>(u)])] =
        std::max(r.y[static_cast<size_t>(1 + u)], 0.0);
  for (size_t q = 0; q < pa.pairs.size(); ++q) {
    const double yq = r.y[static_cast<size_t>(1 + nu) + q];
    rep.lambda[static_cast<size_t>(pa.pairs[q].first)] = std::max(yq, 0.0);
    rep.lambda[static_cast<size_t>(pa.pairs[q].second)] = std::max(-yq, 0.0);
  }

  HermitianMatrix rho = r.x[0] * (1.0 / r.x[0].trace());
  rep.dual_rho = DensityMatrix(rho);
  return rep;
}

double lower_prevision_sdp(const QuantumAssessmentSet& a, const HermitianGamble& f) {
  return lower_prevision_report(a, f).value;
}

double upper_prevision_sdp(const QuantumAssessmentSet& a, const HermitianGamble& f) {
  return -lower_prevision_sdp(a, HermitianGamble(f.shape, -f.g));
}

std::vector<double> born_probabilities(const DensityMatrix& rho, const ProjectiveMeasurement& mmt) {
  if (mmt.projectors().front().dim() != rho.dim())
    throw ValidationError("measurement/state dimension mismatch");
  std::vector<double> p;
  p.reserve(mmt.projectors().size());
  for (const auto& proj : mmt.projectors()) p.push_back(trace_product(proj, rho.matrix()));
  return p;
}

DensityMatrix luder_condition(const DensityMatrix& rho, const HermitianMatrix& projector) {
  const int n = rho.dim();
  if (projector.dim() != n) throw ValidationError("projector/state dimension mismatch");
  // idempotence check mirrors ProjectiveMeasurement
  std::vector<Complex> sq(static_cast<size_t>(n) * n, Complex(0, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex acc(0, 0);
      for (int l = 0; l < n; ++l) acc += projector(i, l) * projector(l, j);
      sq[static_cast<size_t>(i) * n + j] = acc;
    }
  if ((HermitianMatrix(n, sq) - projector).max_abs() > 1e-9)
    throw ValidationError("conditioning operator is not a projector");

  // Pi rho Pi
  std::vector<Complex> tmp(static_cast<size_t>(n) * n, Complex(0, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex acc(0, 0);
      for (int l = 0; l < n; ++l) acc += projector(i, l) * rho.matrix()(l, j);
      tmp[static_cast<size_t>(i) * n + j] = acc;
    }
  std::vector<Complex> prp(static_cast<size_t>(n) * n, Complex(0, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex acc(0, 0);
      for (int l = 0; l < n; ++l) acc += tmp[static_cast<size_t>(i) * n + l] * projector(l, j);
      prp[static_cast<size_t>(i) * n + j] = acc;
    }
  HermitianMatrix conditioned(n, std::move(prp));
  const double prob = conditioned.trace();
  if (prob <= 1e-12) throw ValidationError("undefined conditional: zero-probability event");
  return DensityMatrix(conditioned * (1.0 / prob));
}

DensityMatrix unitary_evolve(const DensityMatrix& rho, const ComplexMatrix& u) {
  const int n = rho.dim();
  if (u.dim != n) throw ValidationError("unitary/state dimension mismatch");
  // U^dag U = I within 1e-9
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex acc(0, 0);
      for (int l = 0; l < n; ++l) acc += std::conj(u(l, i)) * u(l, j);
      const Complex want = (i == j) ? Complex(1, 0) : Complex(0, 0);
      worst = std::max(worst, std::abs(acc - want));
    }
  if (worst > 1e-9) throw ValidationError("matrix is not unitary");

  std::vector<Complex> tmp(static_cast<size_t>(n) * n, Complex(0, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex acc(0, 0);
      for (int l = 0; l < n; ++l) acc += u(i, l) * rho.matrix()(l, j);
      tmp[static_cast<size_t>(i) * n + j] = acc;
    }
  std::vector<Complex> out(static_cast<size_t>(n) * n, Complex(0, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex acc(0, 0);
      for (int l = 0; l < n; ++l) acc += tmp[static_cast<size_t>(i) * n + l] * std::conj(u(j, l));
      out[static_cast<size_t>(i) * n + j] = acc;
    }
  return DensityMatrix(HermitianMatrix(n, std::move(out)));
}

QuantumAssessmentSet pinning_assessments(const DensityMatrix& rho, const SystemShape& shape) {
  const int n = shape.total_dim();
  if (rho.dim() != n) throw ValidationError("state does not match the shape");
  std::vector<HermitianMatrix> basis;
  for (int i = 0; i < n; ++i) {
    std::vector<double> d(static_cast<size_t>(n), 0.0);
    d[static_cast<size_t>(i)] = 1.0;
    basis.push_back(HermitianMatrix::diagonal(d));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<Complex> re(static_cast<size_t>(n) * n, Complex(0, 0));
      re[static_cast<size_t>(i) * n + j] = Complex(1, 0);
      re[static_cast<size_t>(j) * n + i] = Complex(1, 0);
      basis.emplace_back(n, std::move(re));
      std::vector<Complex> im(static_cast<size_t>(n) * n, Complex(0, 0));
      im[static_cast<size_t>(i) * n + j] = Complex(0, -1);
      im[static_cast<size_t>(j) * n + i] = Complex(0, 1);
      basis.emplace_back(n, std::move(im));
    }

  std::vector<HermitianGamble> gambles;
  gambles.reserve(2 * basis.size());
  const HermitianMatrix id = HermitianMatrix::identity(n);
  for (const auto& e : basis) {
    const double c = trace_product(e, rho.matrix());
    const HermitianMatrix g = e - id * c;
    gambles.emplace_back(shape, g);
    gambles.emplace_back(shape, -g);
  }
  return QuantumAssessmentSet(shape, std::move(gambles));
}

}  // namespace qgamble
