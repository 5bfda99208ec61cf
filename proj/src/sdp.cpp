#include "qgamble/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

namespace qgamble {

namespace {
thread_local bool g_solver_trace = false;
}

SolverTraceGuard::SolverTraceGuard(bool enable) : previous_(g_solver_trace) {
  g_solver_trace = enable;
}

SolverTraceGuard::~SolverTraceGuard() { g_solver_trace = previous_; }

bool solver_trace_enabled() { return g_solver_trace; }

namespace {

constexpr int kMaxIterations = 200;
constexpr double kStepFraction = 0.98;
constexpr double kConvergeTol = 5e-11;
constexpr double kAcceptTol = 1e-8;  // stall acceptance, matches the public contract

// ---- dense real symmetric matrix helpers (row-major vector<double>) ----

using RMat = std::vector<double>;

RMat rmat_zero(int n) { return RMat(static_cast<size_t>(n) * n, 0.0); }

RMat rmat_identity(int n, double s = 1.0) {
  RMat m = rmat_zero(n);
  for (int i = 0; i < n; ++i) m[static_cast<size_t>(i) * n + i] = s;
  return m;
}

RMat rmat_mul(int n, const RMat& a, const RMat& b) {
  RMat c = rmat_zero(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a[static_cast<size_t>(i) * n + k];
      if (aik == 0.0) continue;
      const double* brow = &b[static_cast<size_t>(k) * n];
      double* crow = &c[static_cast<size_t>(i) * n];
      for (int j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  return c;
}

void rmat_axpy(RMat& y, const RMat& x, double a) {
  for (size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

double rmat_dot(const RMat& a, const RMat& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double rmat_fro(const RMat& a) { return std::sqrt(rmat_dot(a, a)); }

void rmat_symmetrize(int n, RMat& a) {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double m = 0.5 * (a[static_cast<size_t>(i) * n + j] + a[static_cast<size_t>(j) * n + i]);
      a[static_cast<size_t>(i) * n + j] = m;
      a[static_cast<size_t>(j) * n + i] = m;
    }
}

struct SymEig {
  std::vector<double> val;
  RMat vec;  // column k = eigenvector k
};

// Real symmetric eigendecomposition through the Hermitian Jacobi solver;
// real input keeps every rotation real, so taking real parts is exact.
SymEig sym_eig(int n, const RMat& a) {
  std::vector<Complex> z(a.size());
  for (size_t i = 0; i < a.size(); ++i) z[i] = Complex(a[i], 0.0);
  const auto ed = eigh(HermitianMatrix(n, std::move(z)));
  SymEig out;
  out.val = ed.eigenvalues;
  out.vec = rmat_zero(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      out.vec[static_cast<size_t>(i) * n + k] = ed.eigenvectors[static_cast<size_t>(k)][i].real();
  return out;
}

// V f(D) V^T
template <typename F>
RMat eig_apply(int n, const SymEig& e, F f) {
  RMat out = rmat_zero(n);
  for (int k = 0; k < n; ++k) {
    const double fk = f(e.val[static_cast<size_t>(k)]);
    if (fk == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const double vik = e.vec[static_cast<size_t>(i) * n + k];
      if (vik == 0.0) continue;
      for (int j = 0; j < n; ++j)
        out[static_cast<size_t>(i) * n + j] += fk * vik * e.vec[static_cast<size_t>(j) * n + k];
    }
  }
  return out;
}

// Largest alpha in (0, 1] keeping M + alpha * D positive semidefinite,
// shrunk by the step fraction. M must be positive definite.
double step_to_boundary(int n, const RMat& m, const RMat& d) {
  const SymEig em = sym_eig(n, m);
  const RMat inv_sqrt =
      eig_apply(n, em, [](double l) { return 1.0 / std::sqrt(std::max(l, 1e-300)); });
  RMat t = rmat_mul(n, rmat_mul(n, inv_sqrt, d), inv_sqrt);
  rmat_symmetrize(n, t);
  const SymEig et = sym_eig(n, t);
  const double lmin = et.val.front();
  if (lmin >= 0.0) return 1.0;
  return std::min(1.0, -kStepFraction / lmin);
}

// Cholesky with escalating diagonal regularization; returns false if the
// matrix cannot be stabilized.
bool chol_solve(int m, const RMat& a, const std::vector<double>& rhs, std::vector<double>& out) {
  if (m == 0) {
    out.clear();
    return true;
  }
  double tr = 0.0;
  for (int i = 0; i < m; ++i) tr += a[static_cast<size_t>(i) * m + i];
  double reg = 0.0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    RMat l = a;
    if (reg > 0.0)
      for (int i = 0; i < m; ++i) l[static_cast<size_t>(i) * m + i] += reg;
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) {
      for (int j = 0; j <= i; ++j) {
        double sum = l[static_cast<size_t>(i) * m + j];
        for (int k = 0; k < j; ++k)
          sum -= l[static_cast<size_t>(i) * m + k] * l[static_cast<size_t>(j) * m + k];
        if (i == j) {
          if (sum <= 0.0) { ok = false; break; }
          l[static_cast<size_t>(i) * m + j] = std::sqrt(sum);
        } else {
          l[static_cast<size_t>(i) * m + j] = sum / l[static_cast<size_t>(j) * m + j];
        }
      }
    }
    if (ok) {
      std::vector<double> z(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i) {
        double sum = rhs[static_cast<size_t>(i)];
        for (int k = 0; k < i; ++k) sum -= l[static_cast<size_t>(i) * m + k] * z[static_cast<size_t>(k)];
        z[static_cast<size_t>(i)] = sum / l[static_cast<size_t>(i) * m + i];
      }
      out.assign(static_cast<size_t>(m), 0.0);
      for (int i = m - 1; i >= 0; --i) {
        double sum = z[static_cast<size_t>(i)];
        for (int k = i + 1; k < m; ++k) sum -= l[static_cast<size_t>(k) * m + i] * out[static_cast<size_t>(k)];
        out[static_cast<size_t>(i)] = sum / l[static_cast<size_t>(i) * m + i];
      }
      return true;
    }
    reg = (reg == 0.0) ? std::max(1e-14 * tr / m, 1e-30) : reg * 100.0;
    if (reg > 1e-5 * std::max(tr, 1.0)) return false;
  }
  return false;
}

// ---- internal real problem ----

struct BlockMap {
  int real_dim = 0;
  int complex_dim = 0;
  bool embedded = false;
};

struct Internal {
  std::vector<BlockMap> blocks;
  std::vector<RMat> c;               // per block
  std::vector<std::vector<RMat>> a;  // a[i][block]
  std::vector<double> b;
  int m = 0;
  long total_dim = 0;
};

bool has_imaginary(const HermitianMatrix& h) {
  for (const Complex& z : h.data())
    if (z.imag() != 0.0) return true;
  return false;
}

// data embedding E(A) = 1/2 [[Re A, -Im A], [Im A, Re A]]; satisfies
// <E(A), Y>_F = <A, Phi(Y)> for symmetric Y with the extraction below, and
// Phi(R(X)) = X for the unscaled variable embedding R.
RMat embed_half(const HermitianMatrix& h) {
  const int n = h.dim();
  RMat out = rmat_zero(2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex z = h(i, j);
      out[static_cast<size_t>(i) * 2 * n + j] = 0.5 * z.real();
      out[static_cast<size_t>(i + n) * 2 * n + (j + n)] = 0.5 * z.real();
      out[static_cast<size_t>(i) * 2 * n + (j + n)] = -0.5 * z.imag();
      out[static_cast<size_t>(i + n) * 2 * n + j] = 0.5 * z.imag();
    }
  return out;
}

RMat to_real(const HermitianMatrix& h) {
  const int n = h.dim();
  RMat out = rmat_zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[static_cast<size_t>(i) * n + j] = h(i, j).real();
  return out;
}

// adjoint of embed_half: Phi(Y) = 1/2 [(Y11 + Y22) + i (Y21 - Y12)]
HermitianMatrix extract_complex(int n, const RMat& y) {
  std::vector<Complex> out(static_cast<size_t>(n) * n);
  const int nn = 2 * n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = 0.5 * (y[static_cast<size_t>(i) * nn + j] +
                               y[static_cast<size_t>(i + n) * nn + (j + n)]);
      const double im = 0.5 * (y[static_cast<size_t>(i + n) * nn + j] -
                               y[static_cast<size_t>(i) * nn + (j + n)]);
      out[static_cast<size_t>(i) * n + j] = Complex(re, im);
    }
  return HermitianMatrix(n, std::move(out));
}

HermitianMatrix real_to_hermitian(int n, const RMat& m) {
  std::vector<Complex> z(static_cast<size_t>(n) * n);
  for (size_t i = 0; i < z.size(); ++i) z[i] = Complex(m[i], 0.0);
  return HermitianMatrix(n, std::move(z));
}

Internal build_internal(const SemidefiniteProgram& p) {
  const int nb = p.num_blocks();
  if (nb == 0) throw ValidationError("SDP needs at least one block");
  if (static_cast<int>(p.objective.size()) != nb)
    throw ValidationError("SDP objective must have one matrix per block");
  for (const auto& con : p.constraints)
    if (static_cast<int>(con.a.size()) != nb)
      throw ValidationError("SDP constraint must have one matrix per block");

  Internal in;
  in.blocks.resize(static_cast<size_t>(nb));
  for (int bidx = 0; bidx < nb; ++bidx) {
    const auto& blk = p.blocks[static_cast<size_t>(bidx)];
    if (blk.dim <= 0) throw ValidationError("SDP block dimension must be positive");
    auto check_dim = [&](const HermitianMatrix& h) {
      if (h.dim() != blk.dim)
        throw ValidationError("SDP matrix does not match its block dimension");
    };
    check_dim(p.objective[static_cast<size_t>(bidx)]);
    for (const auto& con : p.constraints) check_dim(con.a[static_cast<size_t>(bidx)]);

    bool any_imag = has_imaginary(p.objective[static_cast<size_t>(bidx)]);
    for (const auto& con : p.constraints)
      any_imag = any_imag || has_imaginary(con.a[static_cast<size_t>(bidx)]);

    if (blk.kind == SemidefiniteProgram::BlockKind::NonnegDiagonal) {
      auto check_diag = [&](const HermitianMatrix& h) {
        for (int i = 0; i < h.dim(); ++i)
          for (int j = 0; j < h.dim(); ++j)
            if (i != j && h(i, j) != Complex(0.0, 0.0))
              throw ValidationError("nonneg-diagonal block data must be diagonal");
      };
      check_diag(p.objective[static_cast<size_t>(bidx)]);
      for (const auto& con : p.constraints) check_diag(con.a[static_cast<size_t>(bidx)]);
      any_imag = false;
    }
    auto& bm = in.blocks[static_cast<size_t>(bidx)];
    bm.complex_dim = blk.dim;
    bm.embedded = any_imag;
    bm.real_dim = any_imag ? 2 * blk.dim : blk.dim;
    in.total_dim += bm.real_dim;
  }

  in.m = p.num_constraints();
  in.b.resize(static_cast<size_t>(in.m));
  auto convert = [&](const HermitianMatrix& h, int bidx) {
    return in.blocks[static_cast<size_t>(bidx)].embedded ? embed_half(h) : to_real(h);
  };
  in.c.reserve(static_cast<size_t>(nb));
  for (int bidx = 0; bidx < nb; ++bidx)
    in.c.push_back(convert(p.objective[static_cast<size_t>(bidx)], bidx));
  in.a.resize(static_cast<size_t>(in.m));
  for (int i = 0; i < in.m; ++i) {
    const auto& con = p.constraints[static_cast<size_t>(i)];
    if (!std::isfinite(con.rhs)) throw ValidationError("SDP rhs must be finite");
    in.b[static_cast<size_t>(i)] = con.rhs;
    in.a[static_cast<size_t>(i)].reserve(static_cast<size_t>(nb));
    for (int bidx = 0; bidx < nb; ++bidx)
      in.a[static_cast<size_t>(i)].push_back(convert(con.a[static_cast<size_t>(bidx)], bidx));
  }
  return in;
}

struct IpmState {
  std::vector<RMat> x, s;
  std::vector<double> y;
  double pobj = 0.0, dobj = 0.0, pinf = 0.0, dinf = 0.0, mu = 0.0;
  bool converged = false;
  bool dual_diverged = false;    // candidate primal infeasibility
  bool primal_diverged = false;  // candidate unboundedness
  int iterations = 0;
};

IpmState run_ipm(const Internal& in, std::vector<SdpReport::IterStat>* history) {
  const int nb = static_cast<int>(in.blocks.size());
  const int m = in.m;
  const double nd = static_cast<double>(in.total_dim);

  double norm_b = 1.0, norm_c = 1.0, norm_a = 1.0;
  for (double v : in.b) norm_b = std::max(norm_b, std::abs(v));
  for (const auto& cb : in.c) norm_c = std::max(norm_c, rmat_fro(cb));
  for (const auto& ai : in.a)
    for (const auto& ab : ai) norm_a = std::max(norm_a, rmat_fro(ab));

  IpmState st;
  const double tau_p = std::max({10.0, std::sqrt(nd), std::sqrt(nd) * norm_b / norm_a});
  const double tau_d = std::max({10.0, std::sqrt(nd), norm_c, norm_a});
  st.x.reserve(static_cast<size_t>(nb));
  st.s.reserve(static_cast<size_t>(nb));
  for (const auto& bm : in.blocks) {
    st.x.push_back(rmat_identity(bm.real_dim, tau_p));
    st.s.push_back(rmat_identity(bm.real_dim, tau_d));
  }
  st.y.assign(static_cast<size_t>(m), 0.0);

  auto apply_a = [&](const std::vector<RMat>& xb) {
    std::vector<double> out(static_cast<size_t>(m), 0.0);
    for (int i = 0; i < m; ++i)
      for (int bidx = 0; bidx < nb; ++bidx)
        out[static_cast<size_t>(i)] += rmat_dot(
            in.a[static_cast<size_t>(i)][static_cast<size_t>(bidx)], xb[static_cast<size_t>(bidx)]);
    return out;
  };
  auto apply_at = [&](const std::vector<double>& yv) {
    std::vector<RMat> out;
    out.reserve(static_cast<size_t>(nb));
    for (int bidx = 0; bidx < nb; ++bidx) {
      RMat acc = rmat_zero(in.blocks[static_cast<size_t>(bidx)].real_dim);
      for (int i = 0; i < m; ++i)
        rmat_axpy(acc, in.a[static_cast<size_t>(i)][static_cast<size_t>(bidx)],
                  yv[static_cast<size_t>(i)]);
      out.push_back(std::move(acc));
    }
    return out;
  };

  double prev_mu = std::numeric_limits<double>::infinity();
  int stall_count = 0;

  // near the central-path endpoint the residuals can oscillate; keep the
  // best iterate seen and fall back to it when the loop stops early
  IpmState best;
  double best_score = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    st.iterations = iter + 1;

    const std::vector<double> ax = apply_a(st.x);
    std::vector<double> rp(static_cast<size_t>(m));
    double rp_norm = 0.0;
    for (int i = 0; i < m; ++i) {
      rp[static_cast<size_t>(i)] = in.b[static_cast<size_t>(i)] - ax[static_cast<size_t>(i)];
      rp_norm += rp[static_cast<size_t>(i)] * rp[static_cast<size_t>(i)];
    }
    rp_norm = std::sqrt(rp_norm);

    const std::vector<RMat> aty = apply_at(st.y);
    std::vector<RMat> rd(static_cast<size_t>(nb));
    double rd_norm = 0.0;
    for (int bidx = 0; bidx < nb; ++bidx) {
      RMat r = in.c[static_cast<size_t>(bidx)];
      rmat_axpy(r, st.s[static_cast<size_t>(bidx)], -1.0);
      rmat_axpy(r, aty[static_cast<size_t>(bidx)], -1.0);
      rd_norm += rmat_dot(r, r);
      rd[static_cast<size_t>(bidx)] = std::move(r);
    }
    rd_norm = std::sqrt(rd_norm);

    double xs = 0.0, cx = 0.0, by = 0.0;
    for (int bidx = 0; bidx < nb; ++bidx) {
      xs += rmat_dot(st.x[static_cast<size_t>(bidx)], st.s[static_cast<size_t>(bidx)]);
      cx += rmat_dot(in.c[static_cast<size_t>(bidx)], st.x[static_cast<size_t>(bidx)]);
    }
    for (int i = 0; i < m; ++i) by += in.b[static_cast<size_t>(i)] * st.y[static_cast<size_t>(i)];

    st.pobj = cx;
    st.dobj = by;
    st.mu = xs / nd;
    st.pinf = rp_norm / (1.0 + norm_b);
    st.dinf = rd_norm / (1.0 + norm_c);
    const double relgap = xs / (1.0 + std::abs(cx) + std::abs(by));
    if (history) history->push_back({cx, by, st.pinf, st.dinf});
    if (solver_trace_enabled())
      std::fprintf(stderr, "sdp iter %3d  pobj % .9e  dobj % .9e  pinf %.2e  dinf %.2e  mu %.2e\n",
                   iter, cx, by, st.pinf, st.dinf, st.mu);

    const double score = std::max({st.pinf, st.dinf, relgap});
    if (score < best_score) {
      best_score = score;
      best = st;
    }

    if (st.pinf <= kConvergeTol && st.dinf <= kConvergeTol && relgap <= kConvergeTol) {
      st.converged = true;
      return st;
    }

    double ynorm = 0.0;
    for (double v : st.y) ynorm = std::max(ynorm, std::abs(v));
    if (ynorm > 1e9 * std::max(1.0, norm_b)) {
      st.dual_diverged = true;
      return st;
    }
    double xnorm = 0.0;
    for (const auto& xb : st.x) xnorm = std::max(xnorm, rmat_fro(xb));
    if ((cx < -1e9 * std::max(1.0, norm_b) && st.pinf < 1e-6) || xnorm > 1e12) {
      st.primal_diverged = true;
      return st;
    }

    if (st.mu > 0.97 * prev_mu && (st.pinf > 10 * kConvergeTol || st.dinf > 10 * kConvergeTol ||
                                   relgap > 10 * kConvergeTol)) {
      if (++stall_count > 12) break;
    } else {
      stall_count = 0;
    }
    prev_mu = st.mu;

    // NT scaling per block: W = S^{-1/2} (S^{1/2} X S^{1/2})^{1/2} S^{-1/2}
    std::vector<RMat> w(static_cast<size_t>(nb)), s_inv(static_cast<size_t>(nb));
    bool scaling_ok = true;
    for (int bidx = 0; bidx < nb && scaling_ok; ++bidx) {
      const int n = in.blocks[static_cast<size_t>(bidx)].real_dim;
      const SymEig es = sym_eig(n, st.s[static_cast<size_t>(bidx)]);
      if (es.val.front() <= 0.0) { scaling_ok = false; break; }
      const RMat s_half = eig_apply(n, es, [](double l) { return std::sqrt(l); });
      const RMat s_half_inv = eig_apply(n, es, [](double l) { return 1.0 / std::sqrt(l); });
      s_inv[static_cast<size_t>(bidx)] = eig_apply(n, es, [](double l) { return 1.0 / l; });
      RMat t = rmat_mul(n, rmat_mul(n, s_half, st.x[static_cast<size_t>(bidx)]), s_half);
      rmat_symmetrize(n, t);
      const SymEig et = sym_eig(n, t);
      if (et.val.front() <= 0.0) { scaling_ok = false; break; }
      const RMat t_half = eig_apply(n, et, [](double l) { return std::sqrt(l); });
      RMat wb = rmat_mul(n, rmat_mul(n, s_half_inv, t_half), s_half_inv);
      rmat_symmetrize(n, wb);
      w[static_cast<size_t>(bidx)] = std::move(wb);
    }
    if (!scaling_ok) break;

    std::vector<std::vector<RMat>> waw(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
      waw[static_cast<size_t>(j)].resize(static_cast<size_t>(nb));
      for (int bidx = 0; bidx < nb; ++bidx) {
        const int n = in.blocks[static_cast<size_t>(bidx)].real_dim;
        waw[static_cast<size_t>(j)][static_cast<size_t>(bidx)] =
            rmat_mul(n,
                     rmat_mul(n, w[static_cast<size_t>(bidx)],
                              in.a[static_cast<size_t>(j)][static_cast<size_t>(bidx)]),
                     w[static_cast<size_t>(bidx)]);
      }
    }
    RMat schur(static_cast<size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        double v = 0.0;
        for (int bidx = 0; bidx < nb; ++bidx)
          v += rmat_dot(in.a[static_cast<size_t>(i)][static_cast<size_t>(bidx)],
                        waw[static_cast<size_t>(j)][static_cast<size_t>(bidx)]);
        schur[static_cast<size_t>(i) * m + j] = v;
        schur[static_cast<size_t>(j) * m + i] = v;
      }

    std::vector<RMat> wrdw(static_cast<size_t>(nb));
    for (int bidx = 0; bidx < nb; ++bidx) {
      const int n = in.blocks[static_cast<size_t>(bidx)].real_dim;
      wrdw[static_cast<size_t>(bidx)] =
          rmat_mul(n, rmat_mul(n, w[static_cast<size_t>(bidx)], rd[static_cast<size_t>(bidx)]),
                   w[static_cast<size_t>(bidx)]);
    }

    // Newton solve for a centering target sigma*mu:
    //   A(dX) = rp,  A*(dy) + dS = Rd,  dX + W dS W = sigma*mu*S^{-1} - X
    auto newton = [&](double sigma_mu, std::vector<double>& dy, std::vector<RMat>& dx,
                      std::vector<RMat>& ds) -> bool {
      std::vector<RMat> rc(static_cast<size_t>(nb));
      for (int bidx = 0; bidx < nb; ++bidx) {
        RMat r = s_inv[static_cast<size_t>(bidx)];
        for (double& v : r) v *= sigma_mu;
        rmat_axpy(r, st.x[static_cast<size_t>(bidx)], -1.0);
        rc[static_cast<size_t>(bidx)] = std::move(r);
      }
      std::vector<double> rhs(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i) {
        double v = rp[static_cast<size_t>(i)];
        for (int bidx = 0; bidx < nb; ++bidx) {
          v -= rmat_dot(in.a[static_cast<size_t>(i)][static_cast<size_t>(bidx)],
                        rc[static_cast<size_t>(bidx)]);
          v += rmat_dot(in.a[static_cast<size_t>(i)][static_cast<size_t>(bidx)],
                        wrdw[static_cast<size_t>(bidx)]);
        }
        rhs[static_cast<size_t>(i)] = v;
      }
      if (!chol_solve(m, schur, rhs, dy)) return false;
      ds.assign(static_cast<size_t>(nb), RMat());
      dx.assign(static_cast<size_t>(nb), RMat());
      const std::vector<RMat> atdy = apply_at(dy);
      for (int bidx = 0; bidx < nb; ++bidx) {
        const int n = in.blocks[static_cast<size_t>(bidx)].real_dim;
        RMat dsb = rd[static_cast<size_t>(bidx)];
        rmat_axpy(dsb, atdy[static_cast<size_t>(bidx)], -1.0);
        RMat dxb = rc[static_cast<size_t>(bidx)];
        const RMat wdsw = rmat_mul(
            n, rmat_mul(n, w[static_cast<size_t>(bidx)], dsb), w[static_cast<size_t>(bidx)]);
        rmat_axpy(dxb, wdsw, -1.0);
        rmat_symmetrize(n, dxb);
        rmat_symmetrize(n, dsb);
        ds[static_cast<size_t>(bidx)] = std::move(dsb);
        dx[static_cast<size_t>(bidx)] = std::move(dxb);
      }
      return true;
    };

    auto steps = [&](const std::vector<RMat>& dx, const std::vector<RMat>& ds) {
      double ap = 1.0, ad = 1.0;
      for (int bidx = 0; bidx < nb; ++bidx) {
        const int n = in.blocks[static_cast<size_t>(bidx)].real_dim;
        ap = std::min(ap, step_to_boundary(n, st.x[static_cast<size_t>(bidx)],
                                           dx[static_cast<size_t>(bidx)]));
        ad = std::min(ad, step_to_boundary(n, st.s[static_cast<size_t>(bidx)],
                                           ds[static_cast<size_t>(bidx)]));
      }
      return std::pair<double, double>(ap, ad);
    };

    // predictor
    std::vector<double> dy_aff;
    std::vector<RMat> dx_aff, ds_aff;
    if (!newton(0.0, dy_aff, dx_aff, ds_aff)) break;
    const auto [ap_aff, ad_aff] = steps(dx_aff, ds_aff);
    double xs_aff = 0.0;
    for (int bidx = 0; bidx < nb; ++bidx) {
      RMat xa = st.x[static_cast<size_t>(bidx)];
      rmat_axpy(xa, dx_aff[static_cast<size_t>(bidx)], ap_aff);
      RMat sa = st.s[static_cast<size_t>(bidx)];
      rmat_axpy(sa, ds_aff[static_cast<size_t>(bidx)], ad_aff);
      xs_aff += rmat_dot(xa, sa);
    }
    const double mu_aff = std::max(xs_aff / nd, 0.0);
    double sigma = std::pow(mu_aff / st.mu, 3.0);
    sigma = std::clamp(sigma, 1e-10, 1.0);

    // corrector
    std::vector<double> dy;
    std::vector<RMat> dx, ds;
    if (!newton(sigma * st.mu, dy, dx, ds)) break;
    const auto [ap, ad] = steps(dx, ds);
    if (ap < 1e-10 && ad < 1e-10) break;

    for (int bidx = 0; bidx < nb; ++bidx) {
      rmat_axpy(st.x[static_cast<size_t>(bidx)], dx[static_cast<size_t>(bidx)], ap);
      rmat_axpy(st.s[static_cast<size_t>(bidx)], ds[static_cast<size_t>(bidx)], ad);
    }
    for (int i = 0; i < m; ++i) st.y[static_cast<size_t>(i)] += ad * dy[static_cast<size_t>(i)];
  }

  // accept the best iterate at a slightly looser tolerance than the target
  if (best_score <= kAcceptTol) {
    const int iters = st.iterations;
    st = best;
    st.iterations = iters;
    st.converged = true;
  }
  return st;
}

}  // namespace

SdpReport solve_sdp(const SemidefiniteProgram& p) {
  const Internal in = build_internal(p);
  const int nb = static_cast<int>(in.blocks.size());

  SdpReport rep;
  IpmState st = run_ipm(in, &rep.history);
  rep.iterations = st.iterations;

  auto extract_blocks = [&](const std::vector<RMat>& rb) {
    std::vector<HermitianMatrix> out;
    out.reserve(static_cast<size_t>(nb));
    for (int bidx = 0; bidx < nb; ++bidx) {
      const auto& bm = in.blocks[static_cast<size_t>(bidx)];
      out.push_back(bm.embedded
                        ? extract_complex(bm.complex_dim, rb[static_cast<size_t>(bidx)])
                        : real_to_hermitian(bm.complex_dim, rb[static_cast<size_t>(bidx)]));
    }
    return out;
  };

  if (st.converged) {
    rep.status = SolveStatus::Optimal;
    rep.x = extract_blocks(st.x);
    rep.y = st.y;
    // dual slack recomputed in complex arithmetic: S = C - sum_i y_i A_i
    for (int bidx = 0; bidx < nb; ++bidx) {
      HermitianMatrix sb = p.objective[static_cast<size_t>(bidx)];
      for (int i = 0; i < in.m; ++i)
        sb = sb - p.constraints[static_cast<size_t>(i)].a[static_cast<size_t>(bidx)] *
                      st.y[static_cast<size_t>(i)];
      rep.s.push_back(std::move(sb));
    }
    rep.primal_objective = st.pobj;
    rep.dual_objective = st.dobj;
    rep.gap = std::abs(st.pobj - st.dobj);
    return rep;
  }

  // certified unboundedness: the normalized primal iterate is an improving
  // feasible direction
  if (st.primal_diverged) {
    double xnorm = 0.0;
    for (const auto& xb : st.x) xnorm += rmat_dot(xb, xb);
    xnorm = std::sqrt(xnorm);
    std::vector<RMat> dir = st.x;
    for (auto& db : dir)
      for (double& v : db) v /= xnorm;
    double adir = 0.0, cdir = 0.0;
    for (int i = 0; i < in.m; ++i) {
      double v = 0.0;
      for (int bidx = 0; bidx < nb; ++bidx)
        v += rmat_dot(in.a[static_cast<size_t>(i)][static_cast<size_t>(bidx)],
                      dir[static_cast<size_t>(bidx)]);
      adir = std::max(adir, std::abs(v));
    }
    for (int bidx = 0; bidx < nb; ++bidx)
      cdir += rmat_dot(in.c[static_cast<size_t>(bidx)], dir[static_cast<size_t>(bidx)]);
    if (adir <= 1e-6 && cdir <= -1e-8) {
      rep.status = SolveStatus::Unbounded;
      rep.ray = extract_blocks(dir);
      return rep;
    }
  }

  // Feasibility phase: min tau s.t. A(X) + tau (b - A(I)) = b, X PSD,
  // tau >= 0. (X, tau) = (I, 1) is strictly feasible, so this subproblem is
  // well behaved; tau* > 0 certifies primal infeasibility through its dual.
  {
    Internal ph = in;
    BlockMap tau_block;
    tau_block.real_dim = 1;
    tau_block.complex_dim = 1;
    tau_block.embedded = false;
    ph.blocks.push_back(tau_block);
    ph.total_dim += 1;
    for (auto& cb : ph.c)
      for (double& v : cb) v = 0.0;
    ph.c.push_back(RMat{1.0});
    for (int i = 0; i < in.m; ++i) {
      double a_of_id = 0.0;
      for (int bidx = 0; bidx < nb; ++bidx) {
        const int n = in.blocks[static_cast<size_t>(bidx)].real_dim;
        for (int k = 0; k < n; ++k)
          a_of_id +=
              in.a[static_cast<size_t>(i)][static_cast<size_t>(bidx)][static_cast<size_t>(k) * n + k];
      }
      ph.a[static_cast<size_t>(i)].push_back(RMat{in.b[static_cast<size_t>(i)] - a_of_id});
    }

    const IpmState ps = run_ipm(ph, nullptr);
    rep.iterations += ps.iterations;
    double norm_b = 1.0;
    for (double v : in.b) norm_b = std::max(norm_b, std::abs(v));
    if (ps.converged && ps.pobj > 1e-7 * norm_b) {
      double by = 0.0;
      for (int i = 0; i < in.m; ++i)
        by += in.b[static_cast<size_t>(i)] * ps.y[static_cast<size_t>(i)];
      if (by > 0.0) {
        std::vector<double> yhat(ps.y);
        for (double& v : yhat) v /= by;
        // verify the Farkas candidate on the complex data before reporting
        bool ok = true;
        for (int bidx = 0; bidx < nb && ok; ++bidx) {
          HermitianMatrix acc(p.blocks[static_cast<size_t>(bidx)].dim);
          for (int i = 0; i < in.m; ++i)
            acc = acc + p.constraints[static_cast<size_t>(i)].a[static_cast<size_t>(bidx)] *
                            yhat[static_cast<size_t>(i)];
          const auto ed = eigh(acc);
          if (ed.eigenvalues.back() > 1e-7 * std::max(1.0, std::abs(ed.eigenvalues.front())))
            ok = false;
        }
        if (ok) {
          rep.status = SolveStatus::Infeasible;
          rep.farkas_y = yhat;
          return rep;
        }
      }
    }
  }

  rep.status = SolveStatus::NumericalFailure;
  return rep;
}

}  // namespace qgamble
