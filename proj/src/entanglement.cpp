#include "qgamble/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "qgamble/rng.hpp"

namespace qgamble {

namespace {

// factor strides for row-major composite indices
std::vector<int> make_strides(const std::vector<int>& dims) {
  std::vector<int> stride(dims.size(), 1);
  for (int f = static_cast<int>(dims.size()) - 2; f >= 0; --f)
    stride[static_cast<size_t>(f)] =
        stride[static_cast<size_t>(f) + 1] * dims[static_cast<size_t>(f) + 1];
  return stride;
}

// Effective matrix for factor j with all other factors fixed:
// E[a][b] = sum over index pairs agreeing with (a, b) at factor j of
// conj(c[row]) G[row][col] c[col], where c collects the other factors.
HermitianMatrix effective_matrix(const HermitianMatrix& g, const std::vector<int>& dims,
                                 const std::vector<UnitVector>& factors, int j,
                                 const std::vector<int>& stride) {
  const int n = g.dim();
  const int dj = dims[static_cast<size_t>(j)];
  std::vector<Complex> coef(static_cast<size_t>(n), Complex(1.0, 0.0));
  for (int idx = 0; idx < n; ++idx) {
    Complex c(1.0, 0.0);
    int rest = idx;
    for (size_t f = 0; f < dims.size(); ++f) {
      const int comp = rest / stride[f];
      rest %= stride[f];
      if (static_cast<int>(f) != j) c *= factors[f][comp];
    }
    coef[static_cast<size_t>(idx)] = c;
  }
  std::vector<Complex> e(static_cast<size_t>(dj) * dj, Complex(0.0, 0.0));
  for (int row = 0; row < n; ++row) {
    const int a = (row / stride[static_cast<size_t>(j)]) % dj;
    const Complex cr = std::conj(coef[static_cast<size_t>(row)]);
    for (int col = 0; col < n; ++col) {
      const int b = (col / stride[static_cast<size_t>(j)]) % dj;
      e[static_cast<size_t>(a) * dj + b] += cr * g(row, col) * coef[static_cast<size_t>(col)];
    }
  }
  return HermitianMatrix(dj, std::move(e));
}

struct RestartOutcome {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<UnitVector> factors;
  std::vector<double> ascent;
};

RestartOutcome run_restart(const HermitianGamble& g, std::uint64_t seed) {
  const auto& dims = g.shape.dims;
  const auto stride = make_strides(dims);
  const int m = static_cast<int>(dims.size());

  RestartOutcome out;
  out.factors.reserve(static_cast<size_t>(m));
  for (int f = 0; f < m; ++f)
    out.factors.push_back(
        random_unit(dims[static_cast<size_t>(f)], derive_seed(seed, static_cast<std::uint64_t>(f))));

  double value = qform(g.g, ProductState(out.factors));
  constexpr int kMaxSweeps = 500;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    for (int j = 0; j < m; ++j) {
      const auto e = effective_matrix(g.g, dims, out.factors, j, stride);
      const auto ed = eigh(e);
      out.factors[static_cast<size_t>(j)] = ed.eigenvectors.back();
      value = ed.eigenvalues.back();  // each update attains the top eigenvalue
    }
    out.ascent.push_back(value);
    if (out.ascent.size() >= 2 &&
        out.ascent[out.ascent.size() - 1] - out.ascent[out.ascent.size() - 2] < 1e-10)
      break;
  }
  out.value = value;
  return out;
}

}  // namespace

SeesawResult product_state_max(const HermitianGamble& g, int restarts, std::uint64_t rng_seed,
                               int threads) {
  if (restarts < 1) throw ValidationError("need at least one restart");
  if (threads < 1) throw ValidationError("thread count must be positive");
  const auto ed = eigh(g.g);

  SeesawResult res;
  res.upper_bound = ed.eigenvalues.back();

  if (g.shape.factors() == 1) {
    res.value = ed.eigenvalues.back();
    res.state = ProductState({ed.eigenvectors.back()});
    res.ascent = {res.value};
    res.winning_restart = 0;
    return res;
  }

  std::vector<RestartOutcome> outcomes(static_cast<size_t>(restarts));
  if (threads == 1) {
    for (int r = 0; r < restarts; ++r)
      outcomes[static_cast<size_t>(r)] =
          run_restart(g, derive_seed(rng_seed, static_cast<std::uint64_t>(r) + 1000));
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t]() {
        for (int r = t; r < restarts; r += threads)
          outcomes[static_cast<size_t>(r)] =
              run_restart(g, derive_seed(rng_seed, static_cast<std::uint64_t>(r) + 1000));
      });
    for (auto& th : pool) th.join();
  }

  // deterministic reduction: best value, ties broken by lowest restart index
  int best = 0;
  for (int r = 1; r < restarts; ++r)
    if (outcomes[static_cast<size_t>(r)].value > outcomes[static_cast<size_t>(best)].value) best = r;

  res.value = outcomes[static_cast<size_t>(best)].value;
  res.state = ProductState(outcomes[static_cast<size_t>(best)].factors);
  res.ascent = outcomes[static_cast<size_t>(best)].ascent;
  res.winning_restart = best;
  return res;
}

WitnessReport witness_check(const HermitianGamble& h, const DensityMatrix& rho, double epsilon,
                            int restarts, std::uint64_t rng_seed, int threads,
                            double verdict_tol) {
  if (epsilon < 0.0) throw ValidationError("epsilon must be nonnegative");
  if (verdict_tol < 0.0) throw ValidationError("tolerance must be nonnegative");
  if (rho.dim() != h.g.dim()) throw ValidationError("witness/state dimension mismatch");

  WitnessReport rep;
  rep.epsilon = epsilon;
  rep.seesaw = product_state_max(h, restarts, rng_seed, threads);
  const double trace_h = trace_product(h.g, rho.matrix());
  // the shift by eps*I acts additively on both quantities
  rep.trace_value = trace_h - epsilon;
  rep.product_max = rep.seesaw.value - epsilon;
  rep.epsilon_band_lo = rep.seesaw.value;
  rep.epsilon_band_hi = trace_h;
  rep.condition_holds = rep.trace_value >= -verdict_tol && rep.product_max <= -verdict_tol;
  return rep;
}

HermitianMatrix partial_transpose(const HermitianMatrix& a, const std::vector<int>& dims) {
  if (dims.size() != 2) throw ValidationError("partial transpose expects a bipartite shape");
  const int n1 = dims[0], n2 = dims[1];
  if (n1 * n2 != a.dim()) throw ValidationError("shape does not match matrix size");
  std::vector<Complex> out(static_cast<size_t>(a.dim()) * a.dim());
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i2 = 0; i2 < n2; ++i2)
      for (int j1 = 0; j1 < n1; ++j1)
        for (int j2 = 0; j2 < n2; ++j2)
          out[static_cast<size_t>(i1 * n2 + i2) * a.dim() + (j1 * n2 + j2)] =
              a(i1 * n2 + j2, j1 * n2 + i2);
  return HermitianMatrix(a.dim(), std::move(out));
}

PptReport ppt_check(const DensityMatrix& rho, const std::vector<int>& dims, double tol) {
  if (tol < 0.0) throw ValidationError("tolerance must be nonnegative");
  const auto pt = partial_transpose(rho.matrix(), dims);
  const auto ed = eigh(pt);
  PptReport rep;
  rep.min_eigenvalue = ed.eigenvalues.front();
  rep.entangled = rep.min_eigenvalue < -tol;
  const int lo = std::min(dims[0], dims[1]);
  const int hi = std::max(dims[0], dims[1]);
  const bool exact_shape = (lo == 2 && (hi == 2 || hi == 3));
  rep.conclusive = exact_shape || rep.entangled;
  return rep;
}

HermitianGamble witness_from_ppt(const DensityMatrix& rho, const std::vector<int>& dims,
                                 int restarts, std::uint64_t rng_seed) {
  const auto verdict = ppt_check(rho, dims);
  if (!verdict.entangled)
    throw ValidationError("state is not certified entangled by the partial transpose");

  const auto pt = partial_transpose(rho.matrix(), dims);
  const auto ed = eigh(pt);
  const auto& eta = ed.eigenvectors.front();
  const int n = pt.dim();
  std::vector<Complex> outer(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      outer[static_cast<size_t>(i) * n + j] = eta[i] * std::conj(eta[j]);
  const HermitianMatrix w = partial_transpose(HermitianMatrix(n, std::move(outer)), dims);

  HermitianGamble wg(SystemShape(dims), w);
  // Tr(rho W) equals the negative PT eigenvalue; W must stay nonnegative on
  // product states
  const double tr = trace_product(w, rho.matrix());
  if (tr >= -1e-9) throw SolverFailure("witness trace check failed");
  const SeesawResult neg =
      product_state_max(HermitianGamble(SystemShape(dims), -w), restarts, rng_seed);
  if (neg.value > 1e-6) throw SolverFailure("witness positivity on product states failed");
  return wg;
}

HermitianGamble chsh_operator(const ChshConfig& c) {
  for (double a : {c.alpha1, c.alpha2, c.beta1, c.beta2})
    if (!std::isfinite(a)) throw ValidationError("angles must be finite");
  auto direction = [](double t) { return pauli_x() * std::sin(t) + pauli_z() * std::cos(t); };
  const HermitianMatrix ga1 = direction(c.alpha1);
  const HermitianMatrix ga2 = direction(c.alpha2);
  const HermitianMatrix gb1 = direction(c.beta1);
  const HermitianMatrix gb2 = direction(c.beta2);
  const HermitianMatrix s = kron(ga1, gb1 - gb2) + kron(ga2, gb1 + gb2);
  return HermitianGamble(SystemShape{2, 2}, s);
}

BellGapReport bell_gap_report(const ChshConfig& c, const DensityMatrix& rho, int restarts,
                              std::uint64_t rng_seed, int threads) {
  const HermitianGamble s = chsh_operator(c);
  if (rho.dim() != 4) throw ValidationError("the correlation experiment runs on two qubits");

  BellGapReport rep;
  rep.quantum_value = trace_product(s.g, rho.matrix());
  rep.seesaw = product_state_max(s, restarts, rng_seed, threads);
  rep.product_max = rep.seesaw.value;
  rep.lambda_max = rep.seesaw.upper_bound;
  if (rep.product_max > rep.algebraic_bound + 1e-9)
    throw SolverFailure("product-state value exceeded the classical bound");
  if (rep.quantum_value > rep.lambda_max + 1e-9)
    throw SolverFailure("quantum value exceeded the spectral bound");
  return rep;
}

}  // namespace qgamble
