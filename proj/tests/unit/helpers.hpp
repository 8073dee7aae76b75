#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "nonmarkov/linalg.hpp"

namespace testing_support {

using nonmarkov::Complex;
using nonmarkov::ComplexMatrix;

inline Complex gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  return {re, n(rng)};
}

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (auto& z : m.entries()) z = gaussian(rng);
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t dim) {
  const ComplexMatrix a = random_matrix(rng, dim, dim);
  return 0.5 * (a + a.adjoint());
}

// Ginibre ensemble: G G^+ / Tr, full rank with probability one.
inline ComplexMatrix random_density(std::mt19937_64& rng, std::size_t dim, std::size_t rank = 0) {
  const ComplexMatrix g = random_matrix(rng, dim, rank == 0 ? dim : rank);
  ComplexMatrix rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  return rho;
}

inline std::vector<Complex> random_state(std::mt19937_64& rng, std::size_t dim) {
  std::vector<Complex> psi(dim);
  double norm = 0.0;
  for (auto& z : psi) {
    z = gaussian(rng);
    norm += std::norm(z);
  }
  for (auto& z : psi) z /= std::sqrt(norm);
  return psi;
}

// QR of a Ginibre matrix by modified Gram-Schmidt.
inline ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t dim) {
  ComplexMatrix q = random_matrix(rng, dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      Complex dot = 0.0;
      for (std::size_t i = 0; i < dim; ++i) dot += std::conj(q(i, k)) * q(i, j);
      for (std::size_t i = 0; i < dim; ++i) q(i, j) -= dot * q(i, k);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) norm += std::norm(q(i, j));
    for (std::size_t i = 0; i < dim; ++i) q(i, j) /= std::sqrt(norm);
  }
  return q;
}

inline std::vector<Complex> basis(std::size_t dim, std::size_t index) {
  std::vector<Complex> v(dim);
  v[index] = 1.0;
  return v;
}

}  // namespace testing_support
