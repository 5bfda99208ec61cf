#include "qgamble/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qgamble/rng.hpp"

namespace qgamble {

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

HermitianMatrix::HermitianMatrix(int dim) : dim_(dim) {
  if (dim <= 0) throw ValidationError("matrix dimension must be positive");
  a_.assign(static_cast<size_t>(dim) * dim, Complex(0.0, 0.0));
}

HermitianMatrix::HermitianMatrix(int dim, std::vector<Complex> row_major) : dim_(dim) {
  if (dim <= 0) throw ValidationError("matrix dimension must be positive");
  if (row_major.size() != static_cast<size_t>(dim) * dim)
    throw ValidationError("matrix data size does not match dimension");
  double mx = 0.0;
  for (Complex z : row_major) {
    if (!is_finite(z)) throw ValidationError("matrix entries must be finite");
    mx = std::max(mx, std::abs(z));
  }
  const double tol = 1e-12 * std::max(1.0, mx);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      const Complex upper = row_major[static_cast<size_t>(i) * dim + j];
      const Complex lower = row_major[static_cast<size_t>(j) * dim + i];
      if (std::abs(upper - std::conj(lower)) > tol)
        throw ValidationError("matrix is not Hermitian within tolerance");
    }
  }
  a_ = std::move(row_major);
  // exact symmetrization; diagonal imaginary parts become exactly zero
  for (int i = 0; i < dim; ++i) {
    a_[static_cast<size_t>(i) * dim + i] = Complex(a_[static_cast<size_t>(i) * dim + i].real(), 0.0);
    for (int j = i + 1; j < dim; ++j) {
      const Complex m = 0.5 * (a_[static_cast<size_t>(i) * dim + j] +
                               std::conj(a_[static_cast<size_t>(j) * dim + i]));
      a_[static_cast<size_t>(i) * dim + j] = m;
      a_[static_cast<size_t>(j) * dim + i] = std::conj(m);
    }
  }
}

HermitianMatrix HermitianMatrix::identity(int dim) {
  HermitianMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.a_[static_cast<size_t>(i) * dim + i] = 1.0;
  return m;
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& d) {
  HermitianMatrix m(static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d[i])) throw ValidationError("matrix entries must be finite");
    m.a_[i * d.size() + i] = d[i];
  }
  return m;
}

HermitianMatrix HermitianMatrix::from_real(int dim, const std::vector<double>& row_major) {
  std::vector<Complex> z(row_major.size());
  for (size_t i = 0; i < row_major.size(); ++i) z[i] = Complex(row_major[i], 0.0);
  return HermitianMatrix(dim, std::move(z));
}

double HermitianMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += a_[static_cast<size_t>(i) * dim_ + i].real();
  return t;
}

double HermitianMatrix::max_abs() const {
  double mx = 0.0;
  for (Complex z : a_) mx = std::max(mx, std::abs(z));
  return mx;
}

double HermitianMatrix::norm_fro() const {
  double s = 0.0;
  for (Complex z : a_) s += std::norm(z);
  return std::sqrt(s);
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  if (dim_ != o.dim_) throw ValidationError("dimension mismatch in matrix sum");
  HermitianMatrix r(dim_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  if (dim_ != o.dim_) throw ValidationError("dimension mismatch in matrix difference");
  HermitianMatrix r(dim_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  HermitianMatrix r(dim_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
  return r;
}

double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw ValidationError("dimension mismatch in trace product");
  const int n = a.dim();
  double t = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex p = a(i, j) * b(j, i);
      t += p.real();
    }
  return t;
}

UnitVector::UnitVector(std::vector<Complex> entries) : v_(std::move(entries)) {
  if (v_.empty()) throw ValidationError("unit vector must be nonempty");
  double n2 = 0.0;
  for (Complex z : v_) {
    if (!is_finite(z)) throw ValidationError("unit vector entries must be finite");
    n2 += std::norm(z);
  }
  const double n = std::sqrt(n2);
  if (n < 1e-12) throw ValidationError("cannot normalize a (near-)zero vector");
  for (Complex& z : v_) z /= n;
}

ProductState::ProductState(std::vector<UnitVector> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw ValidationError("product state needs at least one factor");
}

int ProductState::total_dim() const {
  int d = 1;
  for (const auto& f : factors_) d *= f.dim();
  return d;
}

std::vector<Complex> ProductState::kron_vector() const {
  std::vector<Complex> v{Complex(1.0, 0.0)};
  for (const auto& f : factors_) {
    std::vector<Complex> next(v.size() * f.dim());
    for (size_t i = 0; i < v.size(); ++i)
      for (int j = 0; j < f.dim(); ++j) next[i * f.dim() + j] = v[i] * f[j];
    v = std::move(next);
  }
  return v;
}

EigenDecomposition eigh(const HermitianMatrix& input) {
  const int n = input.dim();
  std::vector<Complex> a = input.data();
  std::vector<Complex> v(static_cast<size_t>(n) * n, Complex(0.0, 0.0));
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i) * n + i] = 1.0;

  auto at = [&](std::vector<Complex>& m, int i, int j) -> Complex& {
    return m[static_cast<size_t>(i) * n + j];
  };

  const double scale = std::max(1.0, input.norm_fro());
  const double stop = 1e-15 * scale;
  const long rotation_cap = 100L * n * n;
  long rotations = 0;

  while (true) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(at(a, p, q));
    off = std::sqrt(2.0 * off);
    if (off <= stop) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Complex apq = at(a, p, q);
        const double r = std::abs(apq);
        if (r <= 1e-18 * scale) continue;
        if (++rotations > rotation_cap)
          throw SolverFailure("eigh: no convergence within the rotation cap");

        const double app = at(a, p, p).real();
        const double aqq = at(a, q, q).real();
        const Complex phase = apq / r;  // e^{i phi}
        const double tau = (aqq - app) / (2.0 * r);
        // small-magnitude root of t^2 - 2 tau t - 1 = 0
        const double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // A <- J^dag A J with J[p][p]=c, J[p][q]=-s e^{i phi},
        // J[q][p]=s e^{-i phi}, J[q][q]=c
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Complex akp = at(a, k, p);
          const Complex akq = at(a, k, q);
          at(a, k, p) = akp * c + akq * (s * std::conj(phase));
          at(a, k, q) = akp * (-s * phase) + akq * c;
          at(a, p, k) = std::conj(at(a, k, p));
          at(a, q, k) = std::conj(at(a, k, q));
        }
        const double rsc2 = 2.0 * r * s * c;
        at(a, p, p) = Complex(app * c * c + aqq * s * s + rsc2, 0.0);
        at(a, q, q) = Complex(app * s * s + aqq * c * c - rsc2, 0.0);
        at(a, p, q) = Complex(0.0, 0.0);
        at(a, q, p) = Complex(0.0, 0.0);
        for (int k = 0; k < n; ++k) {
          const Complex vkp = at(v, k, p);
          const Complex vkq = at(v, k, q);
          at(v, k, p) = vkp * c + vkq * (s * std::conj(phase));
          at(v, k, q) = vkp * (-s * phase) + vkq * c;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return at(a, i, i).real() < at(a, j, j).real();
  });

  EigenDecomposition out;
  out.eigenvalues.reserve(n);
  out.eigenvectors.reserve(n);
  for (int idx : order) {
    out.eigenvalues.push_back(at(a, idx, idx).real());
    std::vector<Complex> col(n);
    int imax = 0;
    double best = -1.0;
    for (int k = 0; k < n; ++k) {
      col[static_cast<size_t>(k)] = at(v, k, idx);
      const double mag = std::abs(col[static_cast<size_t>(k)]);
      if (mag > best + 1e-15) {
        best = mag;
        imax = k;
      }
    }
    // fix the phase: largest component becomes real positive
    const Complex piv = col[static_cast<size_t>(imax)];
    const Complex rot = std::conj(piv) / std::abs(piv);
    for (Complex& z : col) z *= rot;
    out.eigenvectors.emplace_back(std::move(col));
  }
  return out;
}

namespace {
double spectral_norm(const std::vector<double>& eigs) {
  double m = 0.0;
  for (double e : eigs) m = std::max(m, std::abs(e));
  return m;
}
}  // namespace

bool is_psd(const HermitianMatrix& a, double tol) {
  if (tol < 0.0) throw ValidationError("tolerance must be nonnegative");
  const auto ed = eigh(a);
  return ed.eigenvalues.front() >= -tol;
}

bool is_psd(const HermitianMatrix& a) {
  const auto ed = eigh(a);
  const double tol = 1e-8 * std::max(1.0, spectral_norm(ed.eigenvalues));
  return ed.eigenvalues.front() >= -tol;
}

bool is_nd(const HermitianMatrix& a, double tol) {
  if (tol < 0.0) throw ValidationError("tolerance must be nonnegative");
  const auto ed = eigh(a);
  return ed.eigenvalues.back() < -tol;
}

bool is_nd(const HermitianMatrix& a) {
  const auto ed = eigh(a);
  const double tol = 1e-8 * std::max(1.0, spectral_norm(ed.eigenvalues));
  return ed.eigenvalues.back() < -tol;
}

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  const int na = a.dim(), nb = b.dim();
  const int n = na * nb;
  std::vector<Complex> out(static_cast<size_t>(n) * n);
  for (int i1 = 0; i1 < na; ++i1)
    for (int i2 = 0; i2 < nb; ++i2)
      for (int j1 = 0; j1 < na; ++j1)
        for (int j2 = 0; j2 < nb; ++j2)
          out[static_cast<size_t>(i1 * nb + i2) * n + (j1 * nb + j2)] = a(i1, j1) * b(i2, j2);
  return HermitianMatrix(n, std::move(out));
}

HermitianMatrix partial_trace(const HermitianMatrix& a, const std::vector<int>& dims,
                              const std::vector<int>& keep) {
  const int m = static_cast<int>(dims.size());
  long total = 1;
  for (int d : dims) {
    if (d < 1) throw ValidationError("factor dimensions must be positive");
    total *= d;
  }
  if (total != a.dim()) throw ValidationError("factor dimensions do not match matrix size");
  if (keep.empty()) throw ValidationError("keep set must be nonempty");
  std::vector<bool> kept(m, false);
  for (size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= m) throw ValidationError("keep index out of range");
    if (i > 0 && keep[i] <= keep[i - 1]) throw ValidationError("keep set must be strictly increasing");
    kept[static_cast<size_t>(keep[i])] = true;
  }

  int kdim = 1, tdim = 1;
  for (int f = 0; f < m; ++f) (kept[static_cast<size_t>(f)] ? kdim : tdim) *= dims[static_cast<size_t>(f)];

  // strides of each factor in the full index
  std::vector<long> stride(m, 1);
  for (int f = m - 2; f >= 0; --f) stride[static_cast<size_t>(f)] = stride[static_cast<size_t>(f) + 1] * dims[static_cast<size_t>(f) + 1];

  std::vector<int> kept_f, traced_f;
  for (int f = 0; f < m; ++f) (kept[static_cast<size_t>(f)] ? kept_f : traced_f).push_back(f);

  auto unpack = [&](int flat, const std::vector<int>& fs) {
    // multi-index over the listed factors, row-major in their order
    std::vector<int> idx(fs.size());
    for (int k = static_cast<int>(fs.size()) - 1; k >= 0; --k) {
      const int d = dims[static_cast<size_t>(fs[static_cast<size_t>(k)])];
      idx[static_cast<size_t>(k)] = flat % d;
      flat /= d;
    }
    return idx;
  };

  std::vector<Complex> out(static_cast<size_t>(kdim) * kdim, Complex(0.0, 0.0));
  for (int ki = 0; ki < kdim; ++ki) {
    const auto idx_i = unpack(ki, kept_f);
    for (int kj = 0; kj < kdim; ++kj) {
      const auto idx_j = unpack(kj, kept_f);
      Complex sum(0.0, 0.0);
      for (int t = 0; t < tdim; ++t) {
        const auto idx_t = unpack(t, traced_f);
        long row = 0, col = 0;
        for (size_t k = 0; k < kept_f.size(); ++k) {
          row += idx_i[k] * stride[static_cast<size_t>(kept_f[k])];
          col += idx_j[k] * stride[static_cast<size_t>(kept_f[k])];
        }
        for (size_t k = 0; k < traced_f.size(); ++k) {
          row += idx_t[k] * stride[static_cast<size_t>(traced_f[k])];
          col += idx_t[k] * stride[static_cast<size_t>(traced_f[k])];
        }
        sum += a(static_cast<int>(row), static_cast<int>(col));
      }
      out[static_cast<size_t>(ki) * kdim + kj] = sum;
    }
  }
  return HermitianMatrix(kdim, std::move(out));
}

double qform(const HermitianMatrix& g, const ProductState& s) {
  if (g.dim() != s.total_dim()) throw ValidationError("gamble/state dimension mismatch");
  const auto x = s.kron_vector();
  const int n = g.dim();
  Complex acc(0.0, 0.0);
  for (int i = 0; i < n; ++i) {
    Complex row(0.0, 0.0);
    for (int j = 0; j < n; ++j) row += g(i, j) * x[static_cast<size_t>(j)];
    acc += std::conj(x[static_cast<size_t>(i)]) * row;
  }
  const double residue_tol = 1e-12 * std::max(1.0, g.max_abs());
  if (std::abs(acc.imag()) > residue_tol)
    throw SolverFailure("qform: imaginary residue exceeds tolerance");
  return acc.real();
}

UnitVector random_unit(int dim, std::uint64_t seed) {
  if (dim < 1) throw ValidationError("dimension must be >= 1");
  Rng rng(seed);
  std::vector<Complex> v(static_cast<size_t>(dim));
  for (auto& z : v) {
    const double re = rng.normal();
    const double im = rng.normal();
    z = Complex(re, im);
  }
  return UnitVector(std::move(v));
}

HermitianMatrix pauli_x() { return HermitianMatrix(2, {0.0, 1.0, 1.0, 0.0}); }
HermitianMatrix pauli_y() {
  return HermitianMatrix(2, {Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0)});
}
HermitianMatrix pauli_z() { return HermitianMatrix(2, {1.0, 0.0, 0.0, -1.0}); }

}  // namespace qgamble
