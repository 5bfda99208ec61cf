#ifndef QGAMBLE_TESTS_FIXTURES_HPP
#define QGAMBLE_TESTS_FIXTURES_HPP

#include "qgamble/hermitian.hpp"

namespace qgamble::test {

// Entangled two-qubit state (|00> + |11>)(<00| + <11|) / 2.
inline HermitianMatrix rho_e() {
  return HermitianMatrix(4, {0.5, 0.0, 0.0, 0.5,  //
                             0.0, 0.0, 0.0, 0.0,  //
                             0.0, 0.0, 0.0, 0.0,  //
                             0.5, 0.0, 0.0, 0.5});
}

// Indefinite witness-style gamble coefficient matrix, eigenvalues {1,-1,-1,-3}.
inline HermitianMatrix witness_h() {
  return HermitianMatrix(4, {0.0, 0.0, 0.0, 1.0,   //
                             0.0, -2.0, 1.0, 0.0,  //
                             0.0, 1.0, -2.0, 0.0,  //
                             1.0, 0.0, 0.0, 0.0});
}

// Random Hermitian matrix with entries of magnitude O(1), deterministic per seed.
HermitianMatrix random_hermitian(int dim, std::uint64_t seed);

}  // namespace qgamble::test

#endif
