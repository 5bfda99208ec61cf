#ifndef QGAMBLE_SOS_HPP
#define QGAMBLE_SOS_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qgamble/hermitian.hpp"

namespace qgamble {

/// Exponent pair x1^alpha x2^beta, total degree at most 6.
struct Monomial2 {
  int alpha = 0;
  int beta = 0;
  bool operator<(const Monomial2& o) const {
    return alpha != o.alpha ? alpha < o.alpha : beta < o.beta;
  }
  bool operator==(const Monomial2& o) const { return alpha == o.alpha && beta == o.beta; }
};

/// Bivariate polynomial of degree <= 6 as a sparse coefficient map.
class Poly2 {
 public:
  Poly2() = default;

  void set(int alpha, int beta, double coeff);
  double coeff(int alpha, int beta) const;
  const std::map<Monomial2, double>& terms() const { return terms_; }
  double evaluate(double x1, double x2) const;
  Poly2 operator-() const;

 private:
  std::map<Monomial2, double> terms_;
};

/// The 10 monomials of degree <= 3 spanning the squaring basis:
/// [1, x1, x2, x1^2, x1 x2, x2^2, x1^3, x1^2 x2, x1 x2^2, x2^3].
const std::vector<Monomial2>& sos_basis();

/// Moment matrix over the squaring basis: entry (i, j) holds the moment of
/// basis_i * basis_j, so cells whose exponents coincide must agree. The
/// constructor enforces that repeated-entry pattern.
class MomentMatrixZ {
 public:
  explicit MomentMatrixZ(std::vector<double> row_major_10x10);

  double z(int alpha, int beta) const;  // moment of x1^alpha x2^beta
  const HermitianMatrix& matrix() const { return m_; }

 private:
  HermitianMatrix m_;
};

/// Expand v(x)^T G v(x) into a coefficient map; linear in G.
Poly2 poly_from_gram(const HermitianMatrix& g);

struct GramSosResult {
  bool feasible = false;
  std::optional<HermitianMatrix> gram;   // PSD certificate when feasible
  std::vector<double> certificate;       // verified dual ray when infeasible
  int iterations = 0;
};

/// Sum-of-squares decision: is there a PSD Gram matrix reproducing p?
/// Infeasibility is only reported with a dual ray that passes verification.
GramSosResult gram_sos_feasible(const Poly2& p);

/// L(p) = sum_ab coeff(a,b) z(a,b); exact for integer data. The Gram
/// ambiguity (any Gram of p gives the same trace against a structurally
/// valid Z) is asserted on every call.
double lb_evaluate(const MomentMatrixZ& z, const Poly2& p);

/// The integer moment matrix whose operator accepts the negated
/// nonnegative-but-not-SOS polynomial with value 31.
MomentMatrixZ ze_matrix();

/// 4x4 Hankel matrix of the pure moments of one variable (z(k,0) or z(0,k)).
HermitianMatrix marginal_moment_matrix(const MomentMatrixZ& z, int variable);

/// x1^4 x2^2 + x1^2 x2^4 - x1^2 x2^2 + 1: nonnegative (minimum 26/27) yet
/// not a sum of squares.
Poly2 motzkin();

/// Minimum of p over a uniform grid on [-r, r]^2; an upper bound probe on
/// the true minimum, not a certificate.
double grid_min(const Poly2& p, double box_radius, int steps);

}  // namespace qgamble

#endif
