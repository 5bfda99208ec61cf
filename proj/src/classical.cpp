#include "qgamble/classical.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace qgamble {

Gamble::Gamble(std::initializer_list<double> v) : values(v) {
  for (double x : values)
    if (!std::isfinite(x)) throw ValidationError("gamble entries must be finite");
}

Gamble::Gamble(std::vector<double> v) : values(std::move(v)) {
  for (double x : values)
    if (!std::isfinite(x)) throw ValidationError("gamble entries must be finite");
}

double Gamble::min() const {
  if (values.empty()) throw ValidationError("empty gamble");
  return *std::min_element(values.begin(), values.end());
}

double Gamble::max() const {
  if (values.empty()) throw ValidationError("empty gamble");
  return *std::max_element(values.begin(), values.end());
}

Gamble Gamble::operator-() const {
  Gamble g;
  g.values.reserve(values.size());
  for (double v : values) g.values.push_back(-v);
  return g;
}

struct AssessmentSet::Cache {
  std::mutex mutex;
  std::optional<bool> coherent;
  DutchBook book;
};

AssessmentSet::AssessmentSet(int omega_size, std::vector<Gamble> gambles)
    : omega_size_(omega_size), gambles_(std::move(gambles)), cache_(std::make_shared<Cache>()) {
  if (omega_size_ < 1) throw ValidationError("possibility space must be nonempty");
  for (const auto& g : gambles_)
    if (g.size() != omega_size_)
      throw ValidationError("all assessed gambles must share the possibility space");
}

namespace {

// Incoherence (Dutch book) feasibility: lambda >= 0, s >= 0 with
//   sum_i lambda_i g_i(w) + s(w) = -1  for every outcome w,
// i.e. some positive combination of the assessments is <= -1 everywhere.
bool find_dutch_book(const AssessmentSet& a, DutchBook* book) {
  const int n = a.omega_size();
  const int k = a.count();
  if (k == 0) return false;

  LinearProgram p;
  p.objective.assign(static_cast<size_t>(k + n), 0.0);
  p.eq_rows.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(k + n), 0.0));
  p.rhs.assign(static_cast<size_t>(n), -1.0);
  for (int w = 0; w < n; ++w) {
    for (int i = 0; i < k; ++i)
      p.eq_rows[static_cast<size_t>(w)][static_cast<size_t>(i)] = a.gambles()[static_cast<size_t>(i)][w];
    p.eq_rows[static_cast<size_t>(w)][static_cast<size_t>(k + w)] = 1.0;
  }
  const LpReport r = solve_lp(p);
  if (r.status == SolveStatus::NumericalFailure) throw SolverFailure("coherence LP failed");
  if (r.status != SolveStatus::Optimal) return false;  // infeasible: no sure loss derivable

  if (book) {
    book->coefficients.assign(r.x.begin(), r.x.begin() + k);
    std::vector<double> combined(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < k; ++i)
      for (int w = 0; w < n; ++w)
        combined[static_cast<size_t>(w)] +=
            book->coefficients[static_cast<size_t>(i)] * a.gambles()[static_cast<size_t>(i)][w];
    book->combined = Gamble(std::move(combined));
    if (book->combined.max() >= 0.0) throw SolverFailure("Dutch book verification failed");
  }
  return true;
}

void require_coherent(const AssessmentSet& a) {
  if (!is_coherent(a)) throw IncoherentError("incoherent assessment set");
}

}  // namespace

bool is_coherent(const AssessmentSet& a, DutchBook* book) {
  auto& cache = *a.cache_;
  std::lock_guard<std::mutex> lock(cache.mutex);
  if (!cache.coherent.has_value()) {
    DutchBook found;
    const bool incoherent = find_dutch_book(a, &found);
    cache.coherent = !incoherent;
    if (incoherent) cache.book = std::move(found);
  }
  if (!*cache.coherent && book) *book = cache.book;
  return *cache.coherent;
}

bool natural_extension_contains(const AssessmentSet& a, const Gamble& f) {
  require_coherent(a);
  if (f.size() != a.omega_size()) throw ValidationError("gamble size mismatch");
  const int n = a.omega_size();
  const int k = a.count();
  // feasibility of f - sum_i lambda_i g_i >= 0, lambda >= 0
  LinearProgram p;
  p.objective.assign(static_cast<size_t>(k + n), 0.0);
  p.eq_rows.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(k + n), 0.0));
  p.rhs.assign(static_cast<size_t>(n), 0.0);
  for (int w = 0; w < n; ++w) {
    for (int i = 0; i < k; ++i)
      p.eq_rows[static_cast<size_t>(w)][static_cast<size_t>(i)] = a.gambles()[static_cast<size_t>(i)][w];
    p.eq_rows[static_cast<size_t>(w)][static_cast<size_t>(k + w)] = 1.0;
    p.rhs[static_cast<size_t>(w)] = f[w];
  }
  const LpReport r = solve_lp(p);
  if (r.status == SolveStatus::NumericalFailure) throw SolverFailure("extension LP failed");
  return r.status == SolveStatus::Optimal;
}

double lower_prevision(const AssessmentSet& a, const Gamble& f) {
  require_coherent(a);
  if (f.size() != a.omega_size()) throw ValidationError("gamble size mismatch");
  const int n = a.omega_size();
  const int k = a.count();
  // max gamma s.t. f - gamma - sum_i lambda_i g_i >= 0:
  // vars [gamma (free), lambda (>=0), slack (>=0)]
  LinearProgram p;
  p.sense = LinearProgram::Sense::Max;
  p.objective.assign(static_cast<size_t>(1 + k + n), 0.0);
  p.objective[0] = 1.0;
  p.lower.assign(static_cast<size_t>(1 + k + n), 0.0);
  p.lower[0] = LinearProgram::minus_inf;
  p.eq_rows.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(1 + k + n), 0.0));
  p.rhs.assign(static_cast<size_t>(n), 0.0);
  for (int w = 0; w < n; ++w) {
    p.eq_rows[static_cast<size_t>(w)][0] = 1.0;
    for (int i = 0; i < k; ++i)
      p.eq_rows[static_cast<size_t>(w)][static_cast<size_t>(1 + i)] =
          a.gambles()[static_cast<size_t>(i)][w];
    p.eq_rows[static_cast<size_t>(w)][static_cast<size_t>(1 + k + w)] = 1.0;
    p.rhs[static_cast<size_t>(w)] = f[w];
  }
  const LpReport r = solve_lp(p);
  if (r.status != SolveStatus::Optimal) throw SolverFailure("prevision LP did not reach an optimum");
  return r.objective;
}

double upper_prevision(const AssessmentSet& a, const Gamble& f) {
  return -lower_prevision(a, -f);
}

CredalWitness credal_witness(const AssessmentSet& a) {
  require_coherent(a);
  const int n = a.omega_size();
  const int k = a.count();
  // feasibility: p >= 0, sum p = 1, g_i . p - slack_i = 0
  LinearProgram p;
  p.objective.assign(static_cast<size_t>(n + k), 0.0);
  p.eq_rows.assign(static_cast<size_t>(1 + k), std::vector<double>(static_cast<size_t>(n + k), 0.0));
  p.rhs.assign(static_cast<size_t>(1 + k), 0.0);
  for (int w = 0; w < n; ++w) p.eq_rows[0][static_cast<size_t>(w)] = 1.0;
  p.rhs[0] = 1.0;
  for (int i = 0; i < k; ++i) {
    for (int w = 0; w < n; ++w)
      p.eq_rows[static_cast<size_t>(1 + i)][static_cast<size_t>(w)] =
          a.gambles()[static_cast<size_t>(i)][w];
    p.eq_rows[static_cast<size_t>(1 + i)][static_cast<size_t>(n + i)] = -1.0;
  }
  const LpReport r = solve_lp(p);
  if (r.status != SolveStatus::Optimal)
    throw SolverFailure("credal witness LP infeasible on a coherent set");
  CredalWitness w;
  w.pmf.assign(r.x.begin(), r.x.begin() + n);
  for (double& v : w.pmf) v = std::max(v, 0.0);
  double sum = 0.0;
  for (double v : w.pmf) sum += v;
  for (double& v : w.pmf) v /= sum;
  return w;
}

}  // namespace qgamble
