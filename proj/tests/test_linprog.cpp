#include "qgamble/linprog.hpp"

#include <cmath>

#include <doctest.h>

#include "qgamble/rng.hpp"

using namespace qgamble;

namespace {
constexpr double kInf = LinearProgram::plus_inf;
constexpr double kNegInf = LinearProgram::minus_inf;
}  // namespace

TEST_CASE("coin prevision LP: maximal assessments give 1/2") {
  // max gamma s.t. f - gamma*1 - l1*(-1,1) - l2*(1,-1) >= 0, f = (0,1)
  // vars: gamma (free), l1, l2, s1, s2 >= 0
  LinearProgram p;
  p.sense = LinearProgram::Sense::Max;
  p.objective = {1, 0, 0, 0, 0};
  p.eq_rows = {{1, -1, 1, 1, 0},
               {1, 1, -1, 0, 1}};
  p.rhs = {0, 1};
  p.lower = {kNegInf, 0, 0, 0, 0};
  const auto r = solve_lp(p);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("vacuous prevision LP equals the minimum") {
  LinearProgram p;
  p.sense = LinearProgram::Sense::Max;
  p.objective = {1, 0, 0};
  p.eq_rows = {{1, 1, 0}, {1, 0, 1}};
  p.rhs = {3, 5};
  p.lower = {kNegInf, 0, 0};
  const auto r = solve_lp(p);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(3.0));
}

TEST_CASE("sure-loss feasibility: accepting (-1,-1) is incoherent") {
  // -1 - l1*(-1,-1) >= 0  <=>  l1 - s = 1 componentwise
  LinearProgram p;
  p.objective = {0, 0, 0};
  p.eq_rows = {{1, -1, 0}, {1, 0, -1}};
  p.rhs = {1, 1};
  const auto r = solve_lp(p);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x[0] == doctest::Approx(1.0));
}

TEST_CASE("infeasible system returns a verified Farkas certificate") {
  // x1 + x2 = 1 duplicated with conflicting rhs, x free
  LinearProgram p;
  p.objective = {0, 0};
  p.eq_rows = {{1, 1}, {1, 1}};
  p.rhs = {1, 2};
  p.lower = {kNegInf, kNegInf};
  const auto r = solve_lp(p);
  REQUIRE(r.status == SolveStatus::Infeasible);
  REQUIRE(r.farkas.size() == 2);
  double yb = 0.0;
  for (int i = 0; i < 2; ++i) yb += r.farkas[static_cast<size_t>(i)] * p.rhs[static_cast<size_t>(i)];
  CHECK(yb > 1e-9);
  for (int j = 0; j < 2; ++j) {
    double dot = 0.0;
    for (int i = 0; i < 2; ++i) dot += r.farkas[static_cast<size_t>(i)] * p.eq_rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    CHECK(std::abs(dot) <= 1e-9);
  }
}

TEST_CASE("Farkas certificates on random rank-deficient systems") {
  // free variables, b pushed outside range(A): y'A = 0 and y'b > 0 must hold
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(900 + seed);
    const int n = 3, m = 5;
    LinearProgram p;
    p.objective.assign(n, 0.0);
    p.lower.assign(n, kNegInf);
    p.eq_rows.assign(m, std::vector<double>(n));
    for (auto& row : p.eq_rows)
      for (double& v : row) v = rng.normal();
    // rhs = A x0 + noise; with m > n the noise is almost surely off-range
    std::vector<double> x0(n);
    for (double& v : x0) v = rng.normal();
    p.rhs.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) p.rhs[static_cast<size_t>(i)] += p.eq_rows[static_cast<size_t>(i)][static_cast<size_t>(j)] * x0[static_cast<size_t>(j)];
      p.rhs[static_cast<size_t>(i)] += rng.normal();
    }
    const auto r = solve_lp(p);
    REQUIRE(r.status == SolveStatus::Infeasible);
    double yb = 0.0;
    for (int i = 0; i < m; ++i) yb += r.farkas[static_cast<size_t>(i)] * p.rhs[static_cast<size_t>(i)];
    CHECK(yb > 1e-9);
    for (int j = 0; j < n; ++j) {
      double dot = 0.0;
      for (int i = 0; i < m; ++i) dot += r.farkas[static_cast<size_t>(i)] * p.eq_rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
      CHECK(std::abs(dot) <= 1e-9 * std::max(1.0, std::abs(yb)));
    }
  }
}

TEST_CASE("strong duality on random feasible bounded instances") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(1700 + seed);
    const int n = 2 + static_cast<int>(rng.next_u64() % 19);  // up to ~20 vars
    const int m = 1 + static_cast<int>(rng.next_u64() % 6);
    LinearProgram p;
    p.objective.assign(static_cast<size_t>(n), 0.0);
    for (double& v : p.objective) v = 2.0 * rng.uniform();  // c >= 0 keeps it bounded
    p.eq_rows.assign(static_cast<size_t>(m), std::vector<double>(static_cast<size_t>(n)));
    for (auto& row : p.eq_rows)
      for (double& v : row) v = rng.normal();
    std::vector<double> x0(static_cast<size_t>(n));
    for (double& v : x0) v = rng.uniform();
    p.rhs.assign(static_cast<size_t>(m), 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        p.rhs[static_cast<size_t>(i)] += p.eq_rows[static_cast<size_t>(i)][static_cast<size_t>(j)] * x0[static_cast<size_t>(j)];
    const auto r = solve_lp(p);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.gap <= 1e-8);
    double by = 0.0;
    for (int i = 0; i < m; ++i) by += p.rhs[static_cast<size_t>(i)] * r.y[static_cast<size_t>(i)];
    CHECK(by == doctest::Approx(r.objective).epsilon(1e-8));
    // primal feasibility of the reported solution
    for (int i = 0; i < m; ++i) {
      double ax = 0.0;
      for (int j = 0; j < n; ++j) ax += p.eq_rows[static_cast<size_t>(i)][static_cast<size_t>(j)] * r.x[static_cast<size_t>(j)];
      CHECK(ax == doctest::Approx(p.rhs[static_cast<size_t>(i)]).epsilon(1e-8));
    }
    for (double v : r.x) CHECK(v >= -1e-9);
  }
}

TEST_CASE("unbounded LP returns an improving ray") {
  LinearProgram p;
  p.objective = {-1, 0};
  p.eq_rows = {{1, -1}};
  p.rhs = {0};
  const auto r = solve_lp(p);
  REQUIRE(r.status == SolveStatus::Unbounded);
  REQUIRE(r.ray.size() == 2);
  CHECK(r.ray[0] * p.eq_rows[0][0] + r.ray[1] * p.eq_rows[0][1] == doctest::Approx(0.0));
  CHECK(-r.ray[0] < 0.0);  // objective strictly improves along the ray
  CHECK(r.ray[0] >= 0.0);
  CHECK(r.ray[1] >= 0.0);
}

TEST_CASE("variable bounds are honoured") {
  SUBCASE("upper bound binds") {
    LinearProgram p;
    p.sense = LinearProgram::Sense::Max;
    p.objective = {1};
    p.lower = {0};
    p.upper = {3};
    const auto r = solve_lp(p);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective == doctest::Approx(3.0));
  }
  SUBCASE("shifted lower bound") {
    LinearProgram p;
    p.objective = {1};
    p.lower = {-2};
    const auto r = solve_lp(p);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective == doctest::Approx(-2.0));
    CHECK(r.x[0] == doctest::Approx(-2.0));
  }
  SUBCASE("upper bound with unbounded-below variable") {
    LinearProgram p;
    p.sense = LinearProgram::Sense::Max;
    p.objective = {1};
    p.lower = {kNegInf};
    p.upper = {2};
    const auto r = solve_lp(p);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective == doctest::Approx(2.0));
  }
  SUBCASE("inconsistent bounds are rejected") {
    LinearProgram p;
    p.objective = {1};
    p.lower = {1};
    p.upper = {0};
    CHECK_THROWS_AS(solve_lp(p), ValidationError);
  }
}

TEST_CASE("objective stays exact at magnitude 1e6") {
  // the coin prevision scaled by 1e6: optimum value 5e5 must come out to
  // absolute 1e-9
  LinearProgram p;
  p.sense = LinearProgram::Sense::Max;
  p.objective = {1, 0, 0, 0, 0};
  p.eq_rows = {{1, -1e6, 1e6, 1, 0},
               {1, 1e6, -1e6, 0, 1}};
  p.rhs = {0, 1e6};
  p.lower = {kNegInf, 0, 0, 0, 0};
  const auto r = solve_lp(p);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(std::abs(r.objective - 5e5) <= 1e-9);
}

TEST_CASE("degenerate LP does not cycle") {
  // classic Beale-style degeneracy; Bland's rule must terminate
  LinearProgram p;
  p.objective = {-0.75, 150, -0.02, 6, 0, 0, 0};
  p.eq_rows = {{0.25, -60, -0.04, 9, 1, 0, 0},
               {0.5, -90, -0.02, 3, 0, 1, 0},
               {0, 0, 1, 0, 0, 0, 1}};
  p.rhs = {0, 0, 1};
  const auto r = solve_lp(p);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-0.05).epsilon(1e-9));
}
