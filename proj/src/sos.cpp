#include "qgamble/sos.hpp"

#include <algorithm>
#include <cmath>

#include "qgamble/sdp.hpp"

namespace qgamble {

void Poly2::set(int alpha, int beta, double coeff) {
  if (alpha < 0 || beta < 0 || alpha + beta > 6)
    throw ValidationError("monomial degree out of range (<= 6)");
  if (!std::isfinite(coeff)) throw ValidationError("coefficient must be finite");
  if (coeff == 0.0)
    terms_.erase({alpha, beta});
  else
    terms_[{alpha, beta}] = coeff;
}

double Poly2::coeff(int alpha, int beta) const {
  const auto it = terms_.find({alpha, beta});
  return it == terms_.end() ? 0.0 : it->second;
}

double Poly2::evaluate(double x1, double x2) const {
  double acc = 0.0;
  for (const auto& [m, c] : terms_) acc += c * std::pow(x1, m.alpha) * std::pow(x2, m.beta);
  return acc;
}

Poly2 Poly2::operator-() const {
  Poly2 out;
  for (const auto& [m, c] : terms_) out.set(m.alpha, m.beta, -c);
  return out;
}

const std::vector<Monomial2>& sos_basis() {
  static const std::vector<Monomial2> basis = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1},
                                               {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}};
  return basis;
}

namespace {

constexpr int kBasisSize = 10;

// cells (i, j) of the 10x10 Gram grid that land on each degree-<=6 monomial
const std::map<Monomial2, std::vector<std::pair<int, int>>>& cell_map() {
  static const auto cells = [] {
    std::map<Monomial2, std::vector<std::pair<int, int>>> out;
    const auto& basis = sos_basis();
    for (int i = 0; i < kBasisSize; ++i)
      for (int j = 0; j < kBasisSize; ++j) {
        const Monomial2 m{basis[static_cast<size_t>(i)].alpha + basis[static_cast<size_t>(j)].alpha,
                          basis[static_cast<size_t>(i)].beta + basis[static_cast<size_t>(j)].beta};
        out[m].emplace_back(i, j);
      }
    return out;
  }();
  return cells;
}

}  // namespace

MomentMatrixZ::MomentMatrixZ(std::vector<double> row_major_10x10)
    : m_(HermitianMatrix::from_real(kBasisSize, row_major_10x10)) {
  const double scale = std::max(1.0, m_.max_abs());
  for (const auto& [mono, cells] : cell_map()) {
    const double first = m_(cells.front().first, cells.front().second).real();
    for (const auto& [i, j] : cells)
      if (std::abs(m_(i, j).real() - first) > 1e-9 * scale)
        throw ValidationError("moment matrix violates its repeated-entry structure");
  }
}

double MomentMatrixZ::z(int alpha, int beta) const {
  const auto& cells = cell_map();
  const auto it = cells.find({alpha, beta});
  if (it == cells.end()) throw ValidationError("moment exponent out of range");
  return m_(it->second.front().first, it->second.front().second).real();
}

Poly2 poly_from_gram(const HermitianMatrix& g) {
  if (g.dim() != kBasisSize) throw ValidationError("Gram matrix must be 10x10");
  for (const Complex& z : g.data())
    if (z.imag() != 0.0) throw ValidationError("Gram matrix must be real");
  std::map<Monomial2, double> acc;
  const auto& basis = sos_basis();
  for (int i = 0; i < kBasisSize; ++i)
    for (int j = 0; j < kBasisSize; ++j)
      acc[{basis[static_cast<size_t>(i)].alpha + basis[static_cast<size_t>(j)].alpha,
           basis[static_cast<size_t>(i)].beta + basis[static_cast<size_t>(j)].beta}] +=
          g(i, j).real();
  Poly2 p;
  for (const auto& [m, c] : acc)
    if (std::abs(c) > 0.0) p.set(m.alpha, m.beta, c);
  return p;
}

GramSosResult gram_sos_feasible(const Poly2& p) {
  SemidefiniteProgram prog;
  prog.blocks.push_back({SemidefiniteProgram::BlockKind::Psd, kBasisSize});
  // minimizing the trace keeps the feasibility question well posed for the
  // interior-point run and yields a least-trace certificate
  prog.objective.push_back(HermitianMatrix::identity(kBasisSize));

  for (const auto& [mono, cells] : cell_map()) {
    std::vector<Complex> a(static_cast<size_t>(kBasisSize) * kBasisSize, Complex(0, 0));
    for (const auto& [i, j] : cells) a[static_cast<size_t>(i) * kBasisSize + j] = Complex(1, 0);
    SemidefiniteProgram::Constraint row;
    row.a.push_back(HermitianMatrix(kBasisSize, std::move(a)));
    row.rhs = p.coeff(mono.alpha, mono.beta);
    prog.constraints.push_back(std::move(row));
  }

  const SdpReport r = solve_sdp(prog);
  GramSosResult out;
  out.iterations = r.iterations;
  if (r.status == SolveStatus::Optimal) {
    // round-trip verification of the certificate
    const HermitianMatrix& gram = r.x[0];
    if (!is_psd(gram, 1e-7 * std::max(1.0, gram.max_abs())))
      throw SolverFailure("Gram certificate is not PSD");
    const Poly2 back = poly_from_gram(gram);
    for (const auto& [mono, cells] : cell_map()) {
      const double want = p.coeff(mono.alpha, mono.beta);
      if (std::abs(back.coeff(mono.alpha, mono.beta) - want) > 1e-7 * std::max(1.0, std::abs(want)))
        throw SolverFailure("Gram certificate does not reproduce the polynomial");
    }
    out.feasible = true;
    out.gram = gram;
    return out;
  }
  if (r.status == SolveStatus::Infeasible) {
    out.feasible = false;
    out.certificate = r.farkas_y;  // already verified inside the solver
    return out;
  }
  throw SolverFailure("sum-of-squares feasibility SDP failed");
}

double lb_evaluate(const MomentMatrixZ& z, const Poly2& p) {
  double value = 0.0;
  for (const auto& [m, c] : p.terms()) value += c * z.z(m.alpha, m.beta);

  // Gram ambiguity check: two different Gram representatives of p must give
  // the same trace against a structurally consistent Z
  const auto& cells = cell_map();
  std::vector<double> g1(static_cast<size_t>(kBasisSize) * kBasisSize, 0.0);
  std::vector<double> g2(g1);
  for (const auto& [m, c] : p.terms()) {
    const auto& cs = cells.at(m);
    // representative 1: all weight on the first symmetric cell pair
    const auto [i0, j0] = cs.front();
    if (i0 == j0) {
      g1[static_cast<size_t>(i0) * kBasisSize + j0] += c;
    } else {
      g1[static_cast<size_t>(i0) * kBasisSize + j0] += 0.5 * c;
      g1[static_cast<size_t>(j0) * kBasisSize + i0] += 0.5 * c;
    }
    // representative 2: weight spread over every matching cell
    const double share = c / static_cast<double>(cs.size());
    for (const auto& [i, j] : cs) g2[static_cast<size_t>(i) * kBasisSize + j] += share;
  }
  const double t1 = trace_product(HermitianMatrix::from_real(kBasisSize, g1), z.matrix());
  const double t2 = trace_product(HermitianMatrix::from_real(kBasisSize, g2), z.matrix());
  const double scale = std::max({1.0, std::abs(value), z.matrix().max_abs()});
  if (std::abs(t1 - value) > 1e-9 * scale || std::abs(t2 - value) > 1e-9 * scale)
    throw SolverFailure("moment evaluation is Gram-dependent: Z is inconsistent");
  return value;
}

MomentMatrixZ ze_matrix() {
  static const std::vector<double> data = {
      1,      0,      0,      353,       0,  353,    0,         0,  0,  0,
      0,      353,    0,      0,         0,  0,      249572,    0,  66, 0,
      0,      0,      353,    0,         0,  0,      0,         66, 0,  249572,
      353,    0,      0,      249572,    0,  66,     0,         0,  0,  0,
      0,      0,      0,      0,         66, 0,      0,         0,  0,  0,
      353,    0,      0,      66,        0,  249572, 0,         0,  0,  0,
      0,      249572, 0,      0,         0,  0,      706955894, 0,  17, 0,
      0,      0,      66,     0,         0,  0,      0,         17, 0,  17,
      0,      66,     0,      0,         0,  0,      17,        0,  17, 0,
      0,      0,      249572, 0,         0,  0,      0,         17, 0,  706955894};
  MomentMatrixZ z(data);
  if (z.z(0, 0) != 1.0) throw SolverFailure("normalization slot must be 1");
  const auto ed = eigh(z.matrix());
  if (ed.eigenvalues.front() < -1e-6 * z.matrix().max_abs())
    throw SolverFailure("stored moment matrix is not PSD");
  return z;
}

HermitianMatrix marginal_moment_matrix(const MomentMatrixZ& z, int variable) {
  if (variable != 1 && variable != 2) throw ValidationError("variable must be 1 or 2");
  std::vector<double> m(16, 0.0);
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      m[static_cast<size_t>(k) * 4 + l] =
          (variable == 1) ? z.z(k + l, 0) : z.z(0, k + l);
  return HermitianMatrix::from_real(4, m);
}

Poly2 motzkin() {
  Poly2 p;
  p.set(4, 2, 1.0);
  p.set(2, 4, 1.0);
  p.set(2, 2, -1.0);
  p.set(0, 0, 1.0);
  return p;
}

double grid_min(const Poly2& p, double box_radius, int steps) {
  if (box_radius <= 0.0) throw ValidationError("box radius must be positive");
  if (steps < 100) throw ValidationError("need at least 100 grid steps");
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    const double x1 = -box_radius + 2.0 * box_radius * i / steps;
    for (int j = 0; j <= steps; ++j) {
      const double x2 = -box_radius + 2.0 * box_radius * j / steps;
      best = std::min(best, p.evaluate(x1, x2));
    }
  }
  return best;
}

}  // namespace qgamble
