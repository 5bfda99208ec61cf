#ifndef QGAMBLE_QUASIPROB_HPP
#define QGAMBLE_QUASIPROB_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "qgamble/quantum.hpp"

namespace qgamble {

/// Affine combination of product-state point masses; weights may be
/// negative. Fitted charges sum to 1 within 1e-9; data transcribed from
/// print sources is held to 1e-3 by its own tests.
struct SignedCharge {
  struct Atom {
    ProductState state;
    double weight;
  };
  std::vector<Atom> atoms;

  double weight_sum() const;
  double min_weight() const;
};

/// sum_i w_i v_i v_i^dag with v_i the tensored atom vector. Trace equals the
/// weight sum because every atom is normalized.
HermitianMatrix charge_moment_matrix(const SignedCharge& c);

/// Independent product states drawn with per-atom derived seeds.
std::vector<ProductState> sample_product_states(const SystemShape& shape, int count,
                                                std::uint64_t seed);

/// Least-squares weights matching all n^2 real moment coordinates of
/// `target`; throws SolverFailure("ill-conditioned atom set") when the
/// Frobenius residual exceeds 1e-8 (retry with more atoms or a new seed).
std::vector<double> fit_weights(const HermitianMatrix& target,
                                const std::vector<ProductState>& atoms);

/// Draws k random atoms and fits their weights to the target state. The
/// weight sum lands on 1 automatically (unit-trace atoms); this is asserted
/// to 1e-9.
SignedCharge fit_signed_charge(const DensityMatrix& target, const SystemShape& shape, int k_atoms,
                               std::uint64_t rng_seed);

/// Nonnegative-weight representation over the given atoms, when one exists
/// (LP feasibility); nullopt otherwise.
std::optional<std::vector<double>> nonneg_weights(const HermitianMatrix& target,
                                                  const std::vector<ProductState>& atoms);

/// Single-system charge from the eigendecomposition: atoms = eigenvectors,
/// weights = eigenvalues. A genuine probability for any density matrix.
/// Multi-factor shapes are rejected; those need fit_signed_charge.
SignedCharge eigen_charge(const DensityMatrix& rho, const SystemShape& shape);

/// sum_i w_i x_i x_i^dag restricted to one factor of each atom.
HermitianMatrix marginal_moments(const SignedCharge& c, int factor);

}  // namespace qgamble

#endif
