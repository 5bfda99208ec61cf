#ifndef QGAMBLE_HERMITIAN_HPP
#define QGAMBLE_HERMITIAN_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "qgamble/errors.hpp"

namespace qgamble {

using Complex = std::complex<double>;

bool is_finite(Complex z);

/// Dense complex self-adjoint matrix. Inputs are validated against the
/// hermiticity tolerance 1e-12 * max(1, max|entry|) and then symmetrized
/// exactly, so a constructed matrix satisfies a(i,j) == conj(a(j,i)) and has
/// real diagonal bit-for-bit. Immutable after construction.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(int dim);  // zero matrix
  HermitianMatrix(int dim, std::vector<Complex> row_major);

  static HermitianMatrix identity(int dim);
  static HermitianMatrix diagonal(const std::vector<double>& d);
  // Real symmetric input, imaginary parts all zero.
  static HermitianMatrix from_real(int dim, const std::vector<double>& row_major);

  int dim() const { return dim_; }
  Complex operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }
  const std::vector<Complex>& data() const { return a_; }

  double trace() const;      // real by construction
  double max_abs() const;    // max entry magnitude
  double norm_fro() const;

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;
  HermitianMatrix operator-() const { return *this * -1.0; }

 private:
  int dim_;
  std::vector<Complex> a_;
};

// Real part of Tr(A B); equals Tr(A B) exactly for Hermitian A, B.
double trace_product(const HermitianMatrix& a, const HermitianMatrix& b);

/// Normalized complex vector. The constructor rescales its input to unit
/// 2-norm (rejecting zero or non-finite input), so the norm invariant is
/// exact by construction.
class UnitVector {
 public:
  UnitVector(std::vector<Complex> entries);

  int dim() const { return static_cast<int>(v_.size()); }
  Complex operator[](int i) const { return v_[static_cast<size_t>(i)]; }
  const std::vector<Complex>& data() const { return v_; }

 private:
  std::vector<Complex> v_;
};

/// Ordered list of per-subsystem unit vectors; represents x_1 (x) ... (x) x_m.
class ProductState {
 public:
  explicit ProductState(std::vector<UnitVector> factors);

  int num_factors() const { return static_cast<int>(factors_.size()); }
  const UnitVector& factor(int j) const { return factors_[static_cast<size_t>(j)]; }
  int total_dim() const;
  std::vector<Complex> kron_vector() const;

 private:
  std::vector<UnitVector> factors_;
};

struct EigenDecomposition {
  std::vector<double> eigenvalues;     // ascending
  std::vector<UnitVector> eigenvectors;  // same order, orthonormal
};

/// Cyclic Jacobi eigendecomposition. Deterministic for a fixed input;
/// eigenvector phases are fixed so the largest-magnitude component is real
/// positive. Throws SolverFailure after 100*n^2 rotations without
/// convergence (not expected on any finite Hermitian input).
EigenDecomposition eigh(const HermitianMatrix& a);

// lambda_min(a) >= -tol. Default tol: 1e-8 * max(1, ||a||_2).
bool is_psd(const HermitianMatrix& a, double tol);
bool is_psd(const HermitianMatrix& a);

// lambda_max(a) < -tol, strictly: the negative-definite cone is open, so the
// zero matrix and anything touching the boundary are not ND.
bool is_nd(const HermitianMatrix& a, double tol);
bool is_nd(const HermitianMatrix& a);

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b);

/// Reduced matrix over the kept factors (trace preserved). `dims` are the
/// factor dimensions with product equal to dim(a); `keep` holds 0-based
/// factor indices, nonempty, strictly increasing.
HermitianMatrix partial_trace(const HermitianMatrix& a, const std::vector<int>& dims,
                              const std::vector<int>& keep);

/// (x_1 (x) ... (x) x_m)^dag G (x_1 (x) ... (x) x_m). The imaginary residue
/// must be below 1e-12 * max(1, max|G|); it is asserted and discarded.
double qform(const HermitianMatrix& g, const ProductState& s);

/// Haar-like unit vector: i.i.d. standard complex Gaussian entries,
/// normalized. Deterministic per seed.
UnitVector random_unit(int dim, std::uint64_t seed);

// Common fixed matrices.
HermitianMatrix pauli_x();
HermitianMatrix pauli_y();
HermitianMatrix pauli_z();

}  // namespace qgamble

#endif
