#include "qsteer/linalg.hpp"

#include "qsteer/noise.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace qsteer;
using qtest::approx_equal;

namespace {

Vector ket(std::initializer_list<Complex> amplitudes) {
  Vector v(static_cast<Eigen::Index>(amplitudes.size()));
  Eigen::Index i = 0;
  for (const auto& amp : amplitudes) v(i++) = amp;
  return v;
}

constexpr double kInvRoot2 = 0.70710678118654752440;

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("tensor of basis kets concatenates indices") {
  const Vector zero = ket({1, 0});
  const Vector one = ket({0, 1});
  CHECK(approx_equal(tensor(zero, one), ket({0, 1, 0, 0}), 0.0));
  CHECK(approx_equal(tensor(one, zero), ket({0, 0, 1, 0}), 0.0));
}

TEST_CASE("tensor of identity operators") {
  const Matrix id2 = Matrix::Identity(2, 2);
  CHECK(approx_equal(tensor(id2, id2), Matrix::Identity(4, 4), 0.0));
}

TEST_CASE("tensor keeps the first operand most significant") {
  const Vector a = ket({1, 2});
  const Vector b = ket({3, 5, 7});
  const Vector product = tensor(a, b);
  REQUIRE(product.size() == 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) CHECK(product(i * 3 + j) == a(i) * b(j));
}

TEST_CASE("tensor rejects mixed kinds and non-square operators") {
  const Vector v = ket({1, 0});
  const Matrix m = Matrix::Identity(2, 2);
  CHECK_THROWS_AS((void)tensor(v, m), std::invalid_argument);
  Matrix rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS((void)tensor(rect, m), std::invalid_argument);
  CHECK_THROWS_AS((void)tensor(Vector(), v), std::invalid_argument);
}

TEST_CASE("tensor preserves normalization") {
  auto rng = qtest::engine(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector a = qtest::random_state(2 + trial % 7, rng);
    const Vector b = qtest::random_state(2 + (trial * 3) % 5, rng);
    CHECK(is_normalized(tensor(a, b), 1e-9));
  }
}

TEST_CASE("expectation on basis projectors") {
  const Vector zero = ket({1, 0});
  const Vector one = ket({0, 1});
  const Matrix p0 = zero * zero.adjoint();
  const Matrix p1 = one * one.adjoint();
  CHECK(expectation(p0, p0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expectation(p1, p0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("expectation of |+><+| on the maximally mixed qubit") {
  const Vector plus = ket({kInvRoot2, kInvRoot2});
  const Matrix projector = plus * plus.adjoint();
  const Matrix mixed = Matrix::Identity(2, 2) / 2.0;
  // oracle: direct 2x2 trace sum
  Complex trace = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) trace += projector(i, j) * mixed(j, i);
  CHECK(trace.real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(expectation(projector, mixed) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("expectation rejects bad input") {
  const Matrix p2 = Matrix::Identity(2, 2);
  const Matrix rho3 = Matrix::Identity(3, 3) / 3.0;
  CHECK_THROWS_AS((void)expectation(p2, rho3), std::invalid_argument);
  Matrix not_projector(2, 2);
  not_projector << Complex(0.5, 0), Complex(0, 0), Complex(0, 0), Complex(0.7, 0);
  CHECK_THROWS_AS((void)expectation(not_projector, Matrix::Identity(2, 2) / 2.0),
                  std::invalid_argument);
}

TEST_CASE("expectation is linear in the state and bounded") {
  auto rng = qtest::engine(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 2 + trial % 7;
    const Vector u = qtest::random_state(dim, rng);
    const Matrix projector = u * u.adjoint();
    const Matrix rho1 = qtest::random_density(dim, rng);
    const Matrix rho2 = qtest::random_density(dim, rng);
    const double v1 = expectation(projector, rho1);
    const double v2 = expectation(projector, rho2);
    CHECK(v1 >= 0.0);
    CHECK(v1 <= 1.0);
    const double alpha = 0.25 + 0.5 * (trial % 3) / 2.0;
    const Matrix blend = alpha * rho1 + (1.0 - alpha) * rho2;
    CHECK(expectation(projector, blend) ==
          doctest::Approx(alpha * v1 + (1.0 - alpha) * v2).epsilon(1e-10));
  }
}

TEST_CASE("max_eigenvalue on simple Hermitian matrices") {
  CHECK(max_eigenvalue(Matrix::Identity(2, 2)) == doctest::Approx(1.0).epsilon(1e-12));
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = Complex(0.2, 0);
  diag(1, 1) = Complex(0.9, 0);
  CHECK(max_eigenvalue(diag) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("max_eigenvalue of |0><0| + |+><+|") {
  const Vector zero = ket({1, 0});
  const Vector plus = ket({kInvRoot2, kInvRoot2});
  const Matrix pair_sum = zero * zero.adjoint() + plus * plus.adjoint();
  // two rank-1 projectors with overlap 1/sqrt(2): largest root of the 2x2
  // characteristic polynomial is 1 + 1/sqrt(2)
  CHECK(max_eigenvalue(pair_sum) == doctest::Approx(1.0 + kInvRoot2).epsilon(1e-12));
}

TEST_CASE("max_eigenvalue of projector pairs equals 1 + |overlap|") {
  auto rng = qtest::engine(37);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 2 << (trial % 4);  // 2, 4, 8, 16
    const Vector u = qtest::random_state(dim, rng);
    const Vector v = qtest::random_state(dim, rng);
    const Matrix pair_sum = u * u.adjoint() + v * v.adjoint();
    const double expected = 1.0 + std::abs(u.dot(v));
    CHECK(std::abs(max_eigenvalue(pair_sum) - expected) <= 1e-9);
  }
}

TEST_CASE("max_eigenvalue rejects non-Hermitian input") {
  Matrix skew(2, 2);
  skew << Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(0, 0);
  CHECK_THROWS_AS((void)max_eigenvalue(skew), std::invalid_argument);
}

TEST_CASE("fidelity_pure basics") {
  auto rng = qtest::engine(41);
  const Vector psi = qtest::random_state(4, rng);
  CHECK(fidelity_pure(Matrix(psi * psi.adjoint()), psi) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity_pure(Matrix(Matrix::Identity(4, 4) / 4.0), psi) ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS((void)fidelity_pure(Matrix(Matrix::Identity(2, 2) / 2.0), psi),
                  std::invalid_argument);
}

TEST_CASE("werner pair at v = 0.976 has fidelity 0.982") {
  const Vector bell = ket({kInvRoot2, 0, 0, kInvRoot2});
  // oracle: F = (1 + 3v) / 4 for an isotropic mixture
  CHECK((1.0 + 3.0 * 0.976) / 4.0 == doctest::Approx(0.982).epsilon(1e-15));
  CHECK(fidelity_pure(Matrix(werner_pair(0.976)), bell) ==
        doctest::Approx(0.982).epsilon(1e-12));
}

TEST_CASE("fidelity is insensitive to a global phase") {
  auto rng = qtest::engine(43);
  for (int trial = 0; trial < 25; ++trial) {
    const int dim = 2 + trial % 5;
    const Matrix rho = qtest::random_density(dim, rng);
    const Vector psi = qtest::random_state(dim, rng);
    const double theta = 6.2831853 * trial / 25.0;
    const Vector rotated = std::polar(1.0, theta) * psi;
    CHECK(fidelity_pure(rho, rotated) == doctest::Approx(fidelity_pure(rho, psi)).epsilon(1e-12));
  }
}

TEST_CASE("phase_aligned_distance vanishes exactly on phased copies") {
  auto rng = qtest::engine(47);
  const Matrix u = qtest::random_unitary(3, rng);
  const Matrix rotated = std::polar(1.0, 1.234) * u;
  CHECK(phase_aligned_distance(u, rotated) <= 1e-12);
  CHECK(phase_aligned_distance(u, Matrix(Matrix::Identity(3, 3))) > 0.1);
}

TEST_CASE("validators classify states and operators") {
  CHECK(is_unitary(Matrix::Identity(3, 3)));
  CHECK(is_density_matrix(Matrix(Matrix::Identity(4, 4) / 4.0)));
  Matrix negative(2, 2);
  negative << Complex(1.5, 0), Complex(0, 0), Complex(0, 0), Complex(-0.5, 0);
  CHECK(!is_density_matrix(negative));
  CHECK(is_projector(Matrix(Matrix::Zero(2, 2))));
}

}  // TEST_SUITE
