#pragma once

// Shared helpers for the test suites: seeded generators for random states,
// unitaries and density matrices, plus elementwise matrix comparison.

#include "qsteer/linalg.hpp"

#include <random>

namespace qtest {

using qsteer::Complex;
using qsteer::Matrix;
using qsteer::Vector;

inline std::mt19937_64 engine(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  const double re = gauss(rng);
  const double im = gauss(rng);
  return {re, im};
}

inline Vector random_state(int dim, std::mt19937_64& rng) {
  Vector psi(dim);
  for (int j = 0; j < dim; ++j) psi(j) = random_complex(rng);
  psi.normalize();
  return psi;
}

inline Matrix random_unitary(int dim, std::mt19937_64& rng) {
  Matrix gaussian(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) gaussian(i, j) = random_complex(rng);
  Eigen::HouseholderQR<Matrix> qr(gaussian);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex pivot = r(j, j);
    const double magnitude = std::abs(pivot);
    q.col(j) *= magnitude > 0 ? pivot / magnitude : Complex(1, 0);
  }
  return q;
}

inline Matrix random_density(int dim, std::mt19937_64& rng) {
  Matrix gaussian(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) gaussian(i, j) = random_complex(rng);
  Matrix rho = gaussian * gaussian.adjoint();
  rho /= rho.trace().real();
  return rho;
}

template <typename DerivedA, typename DerivedB>
bool approx_equal(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                  double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a.derived() - b.derived()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace qtest
