#pragma once

// Jones-calculus model of the polarization measurement chain: half- and
// quarter-wave-plate matrices, the composed analysis unitary, the HWP angle
// that maps a Fourier qubit factor onto |H>, polarizer projectors, and joint
// click probabilities on a photon pair.
//
// Convention: |H> is logical |0> and |V> is logical |1>. Angles are radians
// throughout the library; degree conversion happens at the CLI edge.

#include "qsteer/linalg.hpp"

#include <numbers>
#include <vector>

namespace qsteer {

template <typename Scalar = double>
using Matrix2T = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar = double>
using Vector2T = Eigen::Vector<std::complex<Scalar>, 2>;
template <typename Scalar = double>
using Matrix4T = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

using Matrix2 = Matrix2T<>;
using Vector2 = Vector2T<>;
using Matrix4 = Matrix4T<>;

enum class Polarization { H, V };

constexpr int logical_index(Polarization p) { return p == Polarization::V ? 1 : 0; }

constexpr Polarization polarization_of(int bit) {
  if (bit != 0 && bit != 1)
    throw std::invalid_argument("polarization_of: bit must be 0 or 1");
  return bit == 0 ? Polarization::H : Polarization::V;
}

/// Half-wave plate at angle theta. Real, Hermitian and unitary.
template <typename Scalar = double>
Matrix2T<Scalar> hwp(Scalar theta) {
  const Scalar c = std::cos(Scalar(2) * theta);
  const Scalar s = std::sin(Scalar(2) * theta);
  Matrix2T<Scalar> m;
  m << ComplexT<Scalar>(c, 0), ComplexT<Scalar>(-s, 0),
       ComplexT<Scalar>(-s, 0), ComplexT<Scalar>(-c, 0);
  return m;
}

/// Quarter-wave plate at angle gamma. The bare transformation has |det| = 2;
/// the 1/sqrt(2) factor restores unitarity so probabilities are conserved.
template <typename Scalar = double>
Matrix2T<Scalar> qwp(Scalar gamma) {
  const Scalar c = std::cos(Scalar(2) * gamma);
  const Scalar s = std::sin(Scalar(2) * gamma);
  const Scalar norm = Scalar(1) / std::sqrt(Scalar(2));
  Matrix2T<Scalar> m;
  m << ComplexT<Scalar>(-c, 1) * norm, ComplexT<Scalar>(s, 0) * norm,
       ComplexT<Scalar>(s, 0) * norm, ComplexT<Scalar>(c, 1) * norm;
  return m;
}

/// Analysis unit of the measurement chain: HWP at theta after a QWP at -pi/4.
template <typename Scalar = double>
Matrix2T<Scalar> waveplate_unit(Scalar theta) {
  return hwp<Scalar>(theta) * qwp<Scalar>(-std::numbers::pi_v<Scalar> / Scalar(4));
}

/// HWP angle that rotates the Fourier factor of qubit m with outcome index k
/// onto |H>: theta = -pi/8 - pi k / 2^(m+1).
inline double solve_hwp_angle(int m, int k) {
  if (m < 1) throw std::invalid_argument("solve_hwp_angle: qubit position must be >= 1");
  if (k < 0) throw std::invalid_argument("solve_hwp_angle: outcome index must be >= 0");
  const double pi = std::numbers::pi;
  return -pi / 8.0 - pi * static_cast<double>(k) / std::exp2(m + 1);
}

enum class WavePlateKind { Half, Quarter };

struct WavePlateElement {
  WavePlateKind kind = WavePlateKind::Half;
  double angle = 0.0;  // radians
};

// Ordered wave-plate settings realizing one measurement basis; elements are
// listed in the order the photon traverses them.
struct WavePlateProgram {
  std::vector<WavePlateElement> elements;
};

inline Matrix2 element_unitary(const WavePlateElement& element) {
  if (!std::isfinite(element.angle))
    throw std::invalid_argument("element_unitary: angle must be finite");
  return element.kind == WavePlateKind::Half ? hwp(element.angle) : qwp(element.angle);
}

/// Composed unitary of a program; the first listed element acts first.
inline Matrix2 program_unitary(const WavePlateProgram& program) {
  if (program.elements.empty())
    throw std::invalid_argument("program_unitary: program must be nonempty");
  Matrix2 u = Matrix2::Identity();
  for (const auto& element : program.elements) u = element_unitary(element) * u;
  return u;
}

/// Wave-plate settings that analyze the Fourier factor (m, k) in the H/V basis.
inline WavePlateProgram fourier_analysis_program(int m, int k) {
  return WavePlateProgram{{{WavePlateKind::Quarter, -std::numbers::pi / 4.0},
                           {WavePlateKind::Half, solve_hwp_angle(m, k)}}};
}

/// Single-qubit measurement projector. Setting 1 projects onto the H/V basis
/// state of `outcome` (a bit); setting 2 projects onto the Fourier factor of
/// qubit m with outcome index k, realized through the wave-plate chain as
/// U(theta)^dag |H><H| U(theta) with theta from solve_hwp_angle.
inline Matrix2 measurement_projector(int setting, int m, int outcome) {
  if (setting == 1) {
    if (outcome != 0 && outcome != 1)
      throw std::invalid_argument("measurement_projector: setting-1 outcome must be a bit");
    Matrix2 p = Matrix2::Zero();
    p(outcome, outcome) = Complex(1, 0);
    return p;
  }
  if (setting == 2) {
    const Matrix2 u = waveplate_unit(solve_hwp_angle(m, outcome));
    Matrix2 h_projector = Matrix2::Zero();
    h_projector(0, 0) = Complex(1, 0);
    return u.adjoint() * h_projector * u;
  }
  throw std::invalid_argument("measurement_projector: setting must be 1 or 2");
}

/// Tr[(projA (x) projB) rho] on a two-qubit pair state.
inline double pair_joint_probability(const Matrix4& rho_pair, const Matrix2& proj_a,
                                     const Matrix2& proj_b, double tol = kDefaultTol) {
  const Matrix4 joint = Eigen::kroneckerProduct(proj_a, proj_b);
  const double value = (joint * rho_pair).trace().real();
  return detail::clamp_unit_interval(value, tol);
}

inline double deg_to_rad(double degrees) { return degrees * std::numbers::pi / 180.0; }

}  // namespace qsteer
