#include "qgamble/quasiprob.hpp"

#include <algorithm>
#include <cmath>

#include "qgamble/linprog.hpp"
#include "qgamble/rng.hpp"

namespace qgamble {

double SignedCharge::weight_sum() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

double SignedCharge::min_weight() const {
  if (atoms.empty()) throw ValidationError("empty charge");
  double m = atoms.front().weight;
  for (const auto& a : atoms) m = std::min(m, a.weight);
  return m;
}

HermitianMatrix charge_moment_matrix(const SignedCharge& c) {
  if (c.atoms.empty()) throw ValidationError("charge needs at least one atom");
  const int n = c.atoms.front().state.total_dim();
  std::vector<Complex> acc(static_cast<size_t>(n) * n, Complex(0.0, 0.0));
  for (const auto& atom : c.atoms) {
    if (atom.state.total_dim() != n) throw ValidationError("charge atoms have mixed dimensions");
    const auto v = atom.state.kron_vector();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        acc[static_cast<size_t>(i) * n + j] +=
            atom.weight * v[static_cast<size_t>(i)] * std::conj(v[static_cast<size_t>(j)]);
  }
  return HermitianMatrix(n, std::move(acc));
}

std::vector<ProductState> sample_product_states(const SystemShape& shape, int count,
                                                std::uint64_t seed) {
  if (count < 1) throw ValidationError("need at least one sample");
  std::vector<ProductState> out;
  out.reserve(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k) {
    std::vector<UnitVector> factors;
    factors.reserve(static_cast<size_t>(shape.factors()));
    for (int f = 0; f < shape.factors(); ++f)
      factors.push_back(random_unit(
          shape.dims[static_cast<size_t>(f)],
          derive_seed(seed, static_cast<std::uint64_t>(k) * 97 + static_cast<std::uint64_t>(f))));
    out.emplace_back(std::move(factors));
  }
  return out;
}

namespace {

// Isometric real coordinates of a Hermitian matrix: the Euclidean norm of
// the coordinate vector equals the Frobenius norm of the matrix.
std::vector<double> real_coords(const HermitianMatrix& m) {
  const int n = m.dim();
  std::vector<double> out;
  out.reserve(static_cast<size_t>(n) * n);
  const double r2 = std::sqrt(2.0);
  for (int i = 0; i < n; ++i) out.push_back(m(i, i).real());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      out.push_back(r2 * m(i, j).real());
      out.push_back(r2 * m(i, j).imag());
    }
  return out;
}

std::vector<double> atom_coords(const ProductState& s) {
  const auto v = s.kron_vector();
  const int n = static_cast<int>(v.size());
  std::vector<Complex> m(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m[static_cast<size_t>(i) * n + j] =
          v[static_cast<size_t>(i)] * std::conj(v[static_cast<size_t>(j)]);
  return real_coords(HermitianMatrix(n, std::move(m)));
}

}  // namespace

std::vector<double> fit_weights(const HermitianMatrix& target,
                                const std::vector<ProductState>& atoms) {
  if (atoms.empty()) throw ValidationError("no atoms to fit");
  const std::vector<double> t = real_coords(target);
  const int d = static_cast<int>(t.size());
  const int k = static_cast<int>(atoms.size());

  std::vector<std::vector<double>> b(static_cast<size_t>(k));
  for (int a = 0; a < k; ++a) {
    if (atoms[static_cast<size_t>(a)].total_dim() != target.dim())
      throw ValidationError("atom dimension does not match the target");
    b[static_cast<size_t>(a)] = atom_coords(atoms[static_cast<size_t>(a)]);
  }

  // minimum-norm least squares through the Gram matrix G = B B^T (d x d)
  std::vector<double> gram(static_cast<size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int a = 0; a < k; ++a)
        s += b[static_cast<size_t>(a)][static_cast<size_t>(i)] *
             b[static_cast<size_t>(a)][static_cast<size_t>(j)];
      gram[static_cast<size_t>(i) * d + j] = s;
    }
  const auto ed = eigh(HermitianMatrix::from_real(d, gram));
  const double cutoff = 1e-12 * std::max(1.0, ed.eigenvalues.back());

  // z = G^+ t
  std::vector<double> z(static_cast<size_t>(d), 0.0);
  for (int e = 0; e < d; ++e) {
    if (ed.eigenvalues[static_cast<size_t>(e)] <= cutoff) continue;
    double dot = 0.0;
    for (int i = 0; i < d; ++i)
      dot += ed.eigenvectors[static_cast<size_t>(e)][i].real() * t[static_cast<size_t>(i)];
    dot /= ed.eigenvalues[static_cast<size_t>(e)];
    for (int i = 0; i < d; ++i)
      z[static_cast<size_t>(i)] += dot * ed.eigenvectors[static_cast<size_t>(e)][i].real();
  }
  std::vector<double> w(static_cast<size_t>(k), 0.0);
  for (int a = 0; a < k; ++a) {
    double dot = 0.0;
    for (int i = 0; i < d; ++i)
      dot += b[static_cast<size_t>(a)][static_cast<size_t>(i)] * z[static_cast<size_t>(i)];
    w[static_cast<size_t>(a)] = dot;
  }

  // Frobenius residual of the reconstruction
  double resid2 = 0.0;
  for (int i = 0; i < d; ++i) {
    double acc = -t[static_cast<size_t>(i)];
    for (int a = 0; a < k; ++a)
      acc += w[static_cast<size_t>(a)] * b[static_cast<size_t>(a)][static_cast<size_t>(i)];
    resid2 += acc * acc;
  }
  if (std::sqrt(resid2) > 1e-8)
    throw SolverFailure("ill-conditioned atom set: residual above tolerance");
  return w;
}

SignedCharge fit_signed_charge(const DensityMatrix& target, const SystemShape& shape, int k_atoms,
                               std::uint64_t rng_seed) {
  const int n = shape.total_dim();
  if (target.dim() != n) throw ValidationError("target does not match the shape");
  if (k_atoms < n * n)
    throw ValidationError("need at least dim^2 atoms to span the moment space");

  const auto atoms = sample_product_states(shape, k_atoms, rng_seed);
  const auto w = fit_weights(target.matrix(), atoms);

  SignedCharge charge;
  charge.atoms.reserve(atoms.size());
  for (size_t i = 0; i < atoms.size(); ++i) charge.atoms.push_back({atoms[i], w[i]});
  if (std::abs(charge.weight_sum() - 1.0) > 1e-9)
    throw SolverFailure("fitted weights do not sum to one");
  return charge;
}

std::optional<std::vector<double>> nonneg_weights(const HermitianMatrix& target,
                                                  const std::vector<ProductState>& atoms) {
  const std::vector<double> t = real_coords(target);
  const int d = static_cast<int>(t.size());
  const int k = static_cast<int>(atoms.size());

  LinearProgram p;
  p.objective.assign(static_cast<size_t>(k), 0.0);
  p.eq_rows.assign(static_cast<size_t>(d), std::vector<double>(static_cast<size_t>(k), 0.0));
  p.rhs = t;
  for (int a = 0; a < k; ++a) {
    const auto col = atom_coords(atoms[static_cast<size_t>(a)]);
    for (int i = 0; i < d; ++i)
      p.eq_rows[static_cast<size_t>(i)][static_cast<size_t>(a)] = col[static_cast<size_t>(i)];
  }
  const auto r = solve_lp(p);
  if (r.status == SolveStatus::Optimal) return r.x;
  if (r.status == SolveStatus::Infeasible) return std::nullopt;
  throw SolverFailure("nonnegative-weight LP failed");
}

SignedCharge eigen_charge(const DensityMatrix& rho, const SystemShape& shape) {
  if (shape.factors() != 1)
    throw ValidationError("eigendecomposition charges exist for single systems only");
  if (shape.total_dim() != rho.dim()) throw ValidationError("state does not match the shape");
  const auto ed = eigh(rho.matrix());
  SignedCharge charge;
  charge.atoms.reserve(ed.eigenvalues.size());
  for (size_t i = 0; i < ed.eigenvalues.size(); ++i)
    charge.atoms.push_back({ProductState({ed.eigenvectors[i]}), ed.eigenvalues[i]});
  return charge;
}

HermitianMatrix marginal_moments(const SignedCharge& c, int factor) {
  if (c.atoms.empty()) throw ValidationError("empty charge");
  if (factor < 0 || factor >= c.atoms.front().state.num_factors())
    throw ValidationError("factor index out of range");
  const int n = c.atoms.front().state.factor(factor).dim();
  std::vector<Complex> acc(static_cast<size_t>(n) * n, Complex(0.0, 0.0));
  for (const auto& atom : c.atoms) {
    const auto& x = atom.state.factor(factor);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        acc[static_cast<size_t>(i) * n + j] += atom.weight * x[i] * std::conj(x[j]);
  }
  return HermitianMatrix(n, std::move(acc));
}

}  // namespace qgamble
