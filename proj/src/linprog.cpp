#include "qgamble/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qgamble/sdp.hpp"  // solver_trace_enabled

namespace qgamble {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-10;
constexpr double kFeasEps = 1e-9;
constexpr long kPivotCap = 1000000;

// Standard-form problem: min c.x, A x = b, x >= 0, plus bookkeeping to map
// solutions back to the caller's variables.
struct Standardized {
  int n = 0;  // standard columns
  int m = 0;  // rows: original equalities first, then upper-bound rows
  std::vector<std::vector<double>> a;  // m x n
  std::vector<double> b;
  std::vector<double> c;
  double offset = 0.0;  // constant shifted out of the objective
  // per original variable: how to recover it
  struct VarMap {
    enum Kind { Shifted, Free, Reflected } kind = Shifted;
    int col = -1;       // primary standard column
    int col_neg = -1;   // second column for Free
    double base = 0.0;  // lower (Shifted) or upper (Reflected)
  };
  std::vector<VarMap> vars;
  std::vector<double> row_sign;  // +-1 applied to make b >= 0
  int original_rows = 0;
};

Standardized standardize(const LinearProgram& p) {
  const int n = p.num_vars();
  const int m = p.num_rows();
  if (n == 0) throw ValidationError("LP has no variables");
  if (static_cast<int>(p.rhs.size()) != m) throw ValidationError("LP rhs size mismatch");
  for (const auto& row : p.eq_rows)
    if (static_cast<int>(row.size()) != n) throw ValidationError("LP row size mismatch");
  std::vector<double> lower = p.lower.empty() ? std::vector<double>(n, 0.0) : p.lower;
  std::vector<double> upper =
      p.upper.empty() ? std::vector<double>(n, LinearProgram::plus_inf) : p.upper;
  if (static_cast<int>(lower.size()) != n || static_cast<int>(upper.size()) != n)
    throw ValidationError("LP bounds size mismatch");
  for (double v : p.objective)
    if (!std::isfinite(v)) throw ValidationError("LP objective must be finite");
  for (double v : p.rhs)
    if (!std::isfinite(v)) throw ValidationError("LP rhs must be finite");
  for (const auto& row : p.eq_rows)
    for (double v : row)
      if (!std::isfinite(v)) throw ValidationError("LP matrix must be finite");
  for (int j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || lower[j] == LinearProgram::plus_inf)
      throw ValidationError("LP lower bound invalid");
    if (std::isnan(upper[j]) || upper[j] == LinearProgram::minus_inf)
      throw ValidationError("LP upper bound invalid");
    if (lower[j] > upper[j]) throw ValidationError("LP lower bound exceeds upper bound");
  }

  const double sense_sign = (p.sense == LinearProgram::Sense::Max) ? -1.0 : 1.0;

  Standardized s;
  s.original_rows = m;
  s.vars.resize(n);
  std::vector<double> b = p.rhs;

  std::vector<std::vector<double>> cols;  // per standard column: m entries
  std::vector<double> cost;

  struct UpperRow { int col; double rhs; };
  std::vector<UpperRow> upper_rows;

  for (int j = 0; j < n; ++j) {
    std::vector<double> col(m);
    for (int i = 0; i < m; ++i) col[i] = p.eq_rows[i][j];
    auto& vm = s.vars[j];
    const double cj = sense_sign * p.objective[j];
    if (lower[j] == LinearProgram::minus_inf && upper[j] == LinearProgram::plus_inf) {
      vm.kind = Standardized::VarMap::Free;
      vm.col = static_cast<int>(cols.size());
      cols.push_back(col);
      cost.push_back(cj);
      vm.col_neg = static_cast<int>(cols.size());
      std::vector<double> neg(col);
      for (double& v : neg) v = -v;
      cols.push_back(neg);
      cost.push_back(-cj);
    } else if (lower[j] == LinearProgram::minus_inf) {
      // x = upper - x'', x'' >= 0
      vm.kind = Standardized::VarMap::Reflected;
      vm.base = upper[j];
      for (int i = 0; i < m; ++i) b[i] -= col[i] * upper[j];
      s.offset += cj * upper[j];
      vm.col = static_cast<int>(cols.size());
      std::vector<double> neg(col);
      for (double& v : neg) v = -v;
      cols.push_back(neg);
      cost.push_back(-cj);
    } else {
      // x = lower + x', x' >= 0 (and x' <= upper - lower if upper finite)
      vm.kind = Standardized::VarMap::Shifted;
      vm.base = lower[j];
      if (lower[j] != 0.0) {
        for (int i = 0; i < m; ++i) b[i] -= col[i] * lower[j];
        s.offset += cj * lower[j];
      }
      vm.col = static_cast<int>(cols.size());
      cols.push_back(col);
      cost.push_back(cj);
      if (upper[j] != LinearProgram::plus_inf)
        upper_rows.push_back({vm.col, upper[j] - lower[j]});
    }
  }

  // one extra row + slack column per finite upper bound
  s.m = m + static_cast<int>(upper_rows.size());
  s.n = static_cast<int>(cols.size()) + static_cast<int>(upper_rows.size());
  s.a.assign(s.m, std::vector<double>(s.n, 0.0));
  s.b.assign(s.m, 0.0);
  s.c = cost;
  s.c.resize(s.n, 0.0);
  for (int j = 0; j < static_cast<int>(cols.size()); ++j)
    for (int i = 0; i < m; ++i) s.a[i][j] = cols[static_cast<size_t>(j)][static_cast<size_t>(i)];
  for (int i = 0; i < m; ++i) s.b[i] = b[i];
  for (size_t k = 0; k < upper_rows.size(); ++k) {
    const int r = m + static_cast<int>(k);
    s.a[r][upper_rows[k].col] = 1.0;
    s.a[r][static_cast<size_t>(cols.size()) + k] = 1.0;
    s.b[r] = upper_rows[k].rhs;
  }

  s.row_sign.assign(s.m, 1.0);
  for (int i = 0; i < s.m; ++i) {
    if (s.b[i] < 0.0) {
      s.row_sign[i] = -1.0;
      s.b[i] = -s.b[i];
      for (double& v : s.a[i]) v = -v;
    }
  }
  return s;
}

// Full-tableau simplex over [real columns | artificial columns | rhs].
// Artificial columns started as the identity, so they double as an explicit
// copy of B^{-1} for dual extraction.
struct Tableau {
  int m, n;  // n = real columns
  std::vector<std::vector<double>> t;
  std::vector<double> cost;  // reduced costs, n + m entries
  double neg_obj = 0.0;      // -(current objective)
  std::vector<int> basis;
  long pivots = 0;

  int rhs_col() const { return n + m; }

  bool pivot(int row, int col) {
    if (++pivots > kPivotCap) return false;
    const double piv = t[row][col];
    const double inv = 1.0 / piv;
    for (double& v : t[row]) v *= inv;
    t[row][col] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = t[i][col];
      if (f == 0.0) continue;
      for (int j = 0; j <= n + m; ++j) t[i][j] -= f * t[row][j];
      t[i][col] = 0.0;
    }
    const double fc = cost[col];
    if (fc != 0.0) {
      for (int j = 0; j < n + m; ++j) cost[j] -= fc * t[row][j];
      neg_obj -= fc * t[row][rhs_col()];
      cost[col] = 0.0;
    }
    basis[row] = col;
    return true;
  }

  // Bland's rule; `allowed` masks columns that may enter.
  SolveStatus run(const std::vector<bool>& allowed, int* unbounded_col) {
    while (true) {
      int enter = -1;
      for (int j = 0; j < n + m; ++j) {
        if (!allowed[j]) continue;
        if (cost[j] < -kCostEps) { enter = j; break; }
      }
      if (enter < 0) return SolveStatus::Optimal;

      int leave = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < m; ++i) {
        if (t[i][enter] > kPivotEps) {
          const double ratio = t[i][rhs_col()] / t[i][enter];
          if (leave < 0 || ratio < best_ratio - 1e-15 ||
              (std::abs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) {
        if (unbounded_col) *unbounded_col = enter;
        return SolveStatus::Unbounded;
      }
      if (!pivot(leave, enter)) return SolveStatus::NumericalFailure;
    }
  }

  // y = c_B . B^{-1}
  std::vector<double> duals(const std::vector<double>& cost_full) const {
    std::vector<double> y(m, 0.0);
    for (int i = 0; i < m; ++i) {
      const double cb = cost_full[basis[i]];
      if (cb == 0.0) continue;
      for (int k = 0; k < m; ++k) y[k] += cb * t[i][n + k];
    }
    return y;
  }
};

}  // namespace

LpReport solve_lp(const LinearProgram& p) {
  const Standardized s = standardize(p);
  const double sense_sign = (p.sense == LinearProgram::Sense::Max) ? -1.0 : 1.0;

  Tableau tab;
  tab.m = s.m;
  tab.n = s.n;
  tab.t.assign(s.m, std::vector<double>(s.n + s.m + 1, 0.0));
  tab.basis.resize(s.m);
  for (int i = 0; i < s.m; ++i) {
    for (int j = 0; j < s.n; ++j) tab.t[i][j] = s.a[i][j];
    tab.t[i][s.n + i] = 1.0;
    tab.t[i][tab.rhs_col()] = s.b[i];
    tab.basis[i] = s.n + i;
  }

  LpReport rep;

  // ---- phase 1: minimize the sum of artificials
  std::vector<double> phase1_cost(s.n + s.m, 0.0);
  for (int k = 0; k < s.m; ++k) phase1_cost[s.n + k] = 1.0;
  tab.cost = phase1_cost;
  tab.neg_obj = 0.0;
  for (int i = 0; i < s.m; ++i) {  // make reduced costs consistent with the artificial basis
    for (int j = 0; j < s.n + s.m; ++j) tab.cost[j] -= tab.t[i][j];
    tab.neg_obj -= tab.t[i][tab.rhs_col()];
  }
  std::vector<bool> allowed(s.n + s.m, true);
  const SolveStatus st1 = tab.run(allowed, nullptr);
  rep.iterations = tab.pivots;
  if (st1 == SolveStatus::NumericalFailure) {
    rep.status = SolveStatus::NumericalFailure;
    return rep;
  }
  const double phase1_obj = -tab.neg_obj;
  if (solver_trace_enabled())
    std::fprintf(stderr, "lp phase1  pivots %ld  artificial residue %.3e\n", tab.pivots,
                 phase1_obj);
  double feas_scale = 1.0;
  for (double v : s.b) feas_scale = std::max(feas_scale, v);
  if (phase1_obj > kFeasEps * feas_scale) {
    // Farkas certificate from the phase-1 duals; verified before reporting.
    const std::vector<double> y = tab.duals(phase1_cost);
    bool ok = true;
    for (int j = 0; j < s.n && ok; ++j) {
      double dot = 0.0;
      for (int i = 0; i < s.m; ++i) dot += y[i] * s.a[i][j];
      if (dot > 1e-7 * feas_scale) ok = false;
    }
    double yb = 0.0;
    for (int i = 0; i < s.m; ++i) yb += y[i] * s.b[i];
    if (yb <= kFeasEps * feas_scale) ok = false;
    if (!ok) {
      rep.status = SolveStatus::NumericalFailure;
      return rep;
    }
    rep.status = SolveStatus::Infeasible;
    rep.farkas.assign(s.original_rows, 0.0);
    for (int i = 0; i < s.original_rows; ++i) rep.farkas[i] = y[i] * s.row_sign[i];
    return rep;
  }

  // ---- phase 2: original costs, artificials banned from entering
  std::vector<double> full_cost(s.n + s.m, 0.0);
  for (int j = 0; j < s.n; ++j) full_cost[j] = s.c[j];
  tab.cost = full_cost;
  tab.neg_obj = 0.0;
  for (int i = 0; i < s.m; ++i) {
    const double cb = full_cost[tab.basis[i]];
    if (cb == 0.0) continue;
    for (int j = 0; j < s.n + s.m; ++j) tab.cost[j] -= cb * tab.t[i][j];
    tab.neg_obj -= cb * tab.t[i][tab.rhs_col()];
  }
  for (int k = 0; k < s.m; ++k) allowed[s.n + k] = false;

  int unbounded_col = -1;
  const SolveStatus st2 = tab.run(allowed, &unbounded_col);
  rep.iterations = tab.pivots;
  if (solver_trace_enabled())
    std::fprintf(stderr, "lp phase2  pivots %ld  status %s\n", tab.pivots, to_string(st2));
  if (st2 == SolveStatus::NumericalFailure) {
    rep.status = SolveStatus::NumericalFailure;
    return rep;
  }

  auto standard_to_original = [&](const std::vector<double>& xs, bool is_direction) {
    std::vector<double> x(static_cast<size_t>(p.num_vars()), 0.0);
    for (int j = 0; j < p.num_vars(); ++j) {
      const auto& vm = s.vars[static_cast<size_t>(j)];
      switch (vm.kind) {
        case Standardized::VarMap::Shifted:
          x[static_cast<size_t>(j)] = (is_direction ? 0.0 : vm.base) + xs[static_cast<size_t>(vm.col)];
          break;
        case Standardized::VarMap::Free:
          x[static_cast<size_t>(j)] =
              xs[static_cast<size_t>(vm.col)] - xs[static_cast<size_t>(vm.col_neg)];
          break;
        case Standardized::VarMap::Reflected:
          x[static_cast<size_t>(j)] = (is_direction ? 0.0 : vm.base) - xs[static_cast<size_t>(vm.col)];
          break;
      }
    }
    return x;
  };

  if (st2 == SolveStatus::Unbounded) {
    std::vector<double> d(static_cast<size_t>(s.n), 0.0);
    d[static_cast<size_t>(unbounded_col)] = 1.0;
    for (int i = 0; i < s.m; ++i)
      if (tab.basis[i] < s.n) d[static_cast<size_t>(tab.basis[i])] = -tab.t[i][unbounded_col];
    rep.status = SolveStatus::Unbounded;
    rep.ray = standard_to_original(d, true);
    return rep;
  }

  std::vector<double> xs(static_cast<size_t>(s.n), 0.0);
  for (int i = 0; i < s.m; ++i)
    if (tab.basis[i] < s.n) xs[static_cast<size_t>(tab.basis[i])] = tab.t[i][tab.rhs_col()];

  const double internal_obj = -tab.neg_obj + s.offset;
  const std::vector<double> y = tab.duals(full_cost);
  double dual_obj = s.offset;
  for (int i = 0; i < s.m; ++i) dual_obj += y[i] * s.b[i];

  rep.status = SolveStatus::Optimal;
  rep.x = standard_to_original(xs, false);
  rep.objective = sense_sign * internal_obj;
  rep.dual_objective = sense_sign * dual_obj;
  rep.gap = std::abs(internal_obj - dual_obj);
  rep.y.assign(static_cast<size_t>(s.original_rows), 0.0);
  for (int i = 0; i < s.original_rows; ++i)
    rep.y[static_cast<size_t>(i)] = sense_sign * y[static_cast<size_t>(i)] * s.row_sign[static_cast<size_t>(i)];
  return rep;
}

}  // namespace qgamble
