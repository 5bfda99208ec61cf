#ifndef QGAMBLE_CLASSICAL_HPP
#define QGAMBLE_CLASSICAL_HPP

#include <memory>
#include <optional>
#include <vector>

#include "qgamble/errors.hpp"
#include "qgamble/linprog.hpp"

namespace qgamble {

/// Real-valued payoff vector over a finite possibility space.
struct Gamble {
  std::vector<double> values;

  Gamble() = default;
  Gamble(std::initializer_list<double> v);
  explicit Gamble(std::vector<double> v);

  int size() const { return static_cast<int>(values.size()); }
  double operator[](int i) const { return values[static_cast<size_t>(i)]; }
  double min() const;
  double max() const;
  Gamble operator-() const;
};

/// A positive combination of assessed gambles that is negative everywhere:
/// the operational certificate of incoherence.
struct DutchBook {
  std::vector<double> coefficients;  // lambda >= 0, one per assessment
  Gamble combined;                   // sum lambda_i g_i, max(combined) < 0
};

/// One probability mass function consistent with every assessment.
struct CredalWitness {
  std::vector<double> pmf;  // nonnegative, sums to 1
};

/// Finite list of gambles an agent has accepted, all on the same space.
/// Coherence is computed lazily and cached; the cache is shared by copies
/// (the value itself is immutable).
class AssessmentSet {
 public:
  AssessmentSet(int omega_size, std::vector<Gamble> gambles);

  int omega_size() const { return omega_size_; }
  const std::vector<Gamble>& gambles() const { return gambles_; }
  int count() const { return static_cast<int>(gambles_.size()); }

 private:
  friend bool is_coherent(const AssessmentSet&, DutchBook*);
  int omega_size_;
  std::vector<Gamble> gambles_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

/// No-Dutch-book test: the set is incoherent iff some nonnegative
/// combination of the assessments dominates -1 everywhere. On incoherence a
/// verified DutchBook is written to `book` when given.
bool is_coherent(const AssessmentSet& a, DutchBook* book = nullptr);

/// Membership of f in the natural extension posi(assessments + nonnegative
/// cone). Throws IncoherentError on incoherent input.
bool natural_extension_contains(const AssessmentSet& a, const Gamble& f);

/// Supremum buying price of f (LP form); equals the minimum expectation over
/// the dual credal set. Throws IncoherentError on incoherent input.
double lower_prevision(const AssessmentSet& a, const Gamble& f);

/// Infimum selling price: -lower_prevision(a, -f).
double upper_prevision(const AssessmentSet& a, const Gamble& f);

/// One pmf in the dual credal set (expectation >= 0 for each assessment).
CredalWitness credal_witness(const AssessmentSet& a);

}  // namespace qgamble

#endif
