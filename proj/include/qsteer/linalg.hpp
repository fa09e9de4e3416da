#pragma once

// Dense complex linear algebra for small quantum systems: tensor products,
// projector expectations, Hermitian spectra and pure-state fidelity. All
// functions are pure and operate on Eigen dense types; dimensions in scope
// are at most 2^8, so everything is direct dense math.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qsteer {

template <typename Scalar = double>
using ComplexT = std::complex<Scalar>;
template <typename Scalar = double>
using VectorT = Eigen::Vector<std::complex<Scalar>, Eigen::Dynamic>;
template <typename Scalar = double>
using MatrixT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using Complex = ComplexT<>;
using Vector = VectorT<>;
using Matrix = MatrixT<>;

// Tolerance for exact-math identities (normalization, hermiticity, unitarity).
inline constexpr double kDefaultTol = 1e-9;
// Tolerance for identities that hold to machine precision (phase alignment,
// basis orthonormality).
inline constexpr double kStrictTol = 1e-12;

/// True when the ket has unit norm within `tol`.
template <typename Derived>
bool is_normalized(const Eigen::MatrixBase<Derived>& psi, double tol = kDefaultTol) {
  return std::abs(psi.squaredNorm() - 1.0) <= tol;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& h, double tol = kDefaultTol) {
  if (h.rows() != h.cols() || h.rows() == 0) return false;
  // max |entry| <= tol, compared on squared magnitudes
  return (h.derived() - h.derived().adjoint()).cwiseAbs2().maxCoeff() <= tol * tol;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double tol = kDefaultTol) {
  if (u.rows() != u.cols() || u.rows() == 0) return false;
  const auto n = u.rows();
  using Plain = typename Derived::PlainObject;
  Plain gram = u.derived() * u.derived().adjoint();
  return (gram - Plain::Identity(n, n)).cwiseAbs2().maxCoeff() <= tol * tol;
}

/// P is a projector when it is Hermitian and idempotent (P^2 == P) within `tol`.
template <typename Derived>
bool is_projector(const Eigen::MatrixBase<Derived>& p, double tol = kDefaultTol) {
  if (!is_hermitian(p, tol)) return false;
  return (p.derived() * p.derived() - p.derived()).cwiseAbs2().maxCoeff() <= tol * tol;
}

/// Hermitian, unit trace, and no eigenvalue below -tol.
template <typename Derived>
bool is_density_matrix(const Eigen::MatrixBase<Derived>& rho, double tol = kDefaultTol) {
  if (!is_hermitian(rho, tol)) return false;
  if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol)
    return false;
  Eigen::SelfAdjointEigenSolver<typename Derived::PlainObject> solver(
      rho.derived(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -tol;
}

/// Kronecker product with the first operand as the most significant factor.
/// Operands must be of the same kind: two kets, or two square operators.
template <typename DerivedA, typename DerivedB>
auto tensor(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  static_assert(std::is_same_v<typename DerivedA::Scalar, typename DerivedB::Scalar>,
                "tensor: operands must share a scalar type");
  if (a.size() == 0 || b.size() == 0)
    throw std::invalid_argument("tensor: operands must be nonempty");
  const bool a_is_ket = a.cols() == 1;
  const bool b_is_ket = b.cols() == 1;
  // 1x1 operands are scalars and combine with either kind
  if (a_is_ket != b_is_ket && a.size() != 1 && b.size() != 1)
    throw std::invalid_argument("tensor: operands must be of the same kind");
  if ((!a_is_ket && a.rows() != a.cols()) || (!b_is_ket && b.rows() != b.cols()))
    throw std::invalid_argument("tensor: operator arguments must be square");
  return Eigen::kroneckerProduct(a.derived(), b.derived()).eval();
}

namespace detail {
// Clamp values that sit within `tol` of the [0, 1] boundary; leave anything
// further out untouched so that invalid inputs remain visible.
inline double clamp_unit_interval(double value, double tol) {
  if (value < 0.0 && value >= -tol) return 0.0;
  if (value > 1.0 && value <= 1.0 + tol) return 1.0;
  return value;
}
}  // namespace detail

/// Tr[P rho] for a projector P against a state rho, clamped to [0, 1] when
/// within `tol` of the boundary.
template <typename DerivedP, typename DerivedR>
double expectation(const Eigen::MatrixBase<DerivedP>& projector,
                   const Eigen::MatrixBase<DerivedR>& rho, double tol = kDefaultTol) {
  if (projector.rows() != rho.rows() || projector.cols() != rho.cols() ||
      rho.rows() != rho.cols())
    throw std::invalid_argument("expectation: dimension mismatch");
  if (!is_projector(projector, tol))
    throw std::invalid_argument("expectation: first argument is not a projector");
  const double value = (projector.derived() * rho.derived()).trace().real();
  return detail::clamp_unit_interval(value, tol);
}

/// Largest eigenvalue of a Hermitian matrix (dense solver; inputs are small).
template <typename Derived>
double max_eigenvalue(const Eigen::MatrixBase<Derived>& h, double tol = kDefaultTol) {
  if (!is_hermitian(h, tol))
    throw std::invalid_argument("max_eigenvalue: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<typename Derived::PlainObject> solver(
      h.derived(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

/// <psi| rho |psi>, the overlap of a state with a pure reference.
template <typename DerivedR, typename DerivedV>
double fidelity_pure(const Eigen::MatrixBase<DerivedR>& rho,
                     const Eigen::MatrixBase<DerivedV>& psi, double tol = kDefaultTol) {
  if (psi.cols() != 1 || rho.rows() != rho.cols() || rho.rows() != psi.rows())
    throw std::invalid_argument("fidelity_pure: dimension mismatch");
  const double value = (psi.derived().adjoint() * rho.derived() * psi.derived())(0, 0).real();
  return detail::clamp_unit_interval(value, tol);
}

/// |<a|b>|^2. Global-phase-insensitive; the standard way to compare states here.
template <typename DerivedA, typename DerivedB>
double state_overlap2(const Eigen::MatrixBase<DerivedA>& a,
                      const Eigen::MatrixBase<DerivedB>& b) {
  if (a.cols() != 1 || b.cols() != 1 || a.rows() != b.rows())
    throw std::invalid_argument("state_overlap2: arguments must be kets of equal dimension");
  return std::norm(a.derived().dot(b.derived()));
}

/// Frobenius distance between A and the nearest global-phase rotation of B.
template <typename DerivedA, typename DerivedB>
double phase_aligned_distance(const Eigen::MatrixBase<DerivedA>& a,
                              const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("phase_aligned_distance: dimension mismatch");
  using Scalar = typename DerivedA::Scalar;
  // subtract the phase-aligned copy entrywise; the quadratic form loses half
  // the significant digits to cancellation near zero
  const Scalar cross = (b.derived().adjoint() * a.derived()).trace();
  const auto magnitude = std::abs(cross);
  const Scalar phase = magnitude > 0 ? Scalar(cross / magnitude) : Scalar(1);
  return (a.derived() - phase * b.derived()).norm();
}

}  // namespace qsteer
