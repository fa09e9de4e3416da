#pragma once

// Qudit encoding over polarization qubits. A qudit of dimension d = 2^N is
// realized by N qubits; this header provides the index/bit-string codec, the
// computational and Fourier bases (with the per-qubit product factors of the
// Fourier states), the maximally entangled two-qudit source, and the d = 2
// supersinglet.

#include "qsteer/linalg.hpp"

#include <numbers>
#include <span>
#include <vector>

namespace qsteer {

// Bijection between a qudit outcome index and the bit string of qubit
// outcomes. Bit 1 is the most significant: index = sum_m bit_m * 2^(N-m).
class QuditIndexCodec {
 public:
  explicit QuditIndexCodec(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 8)
      throw std::invalid_argument("QuditIndexCodec: qubit count must be in [1, 8]");
    dim_ = 1 << n_qubits;
  }

  int n_qubits() const { return n_qubits_; }
  int dim() const { return dim_; }

  /// Bit j_m of `index` for qubit position m in [1, N]; bit 1 is the MSB.
  int bit(int index, int m) const {
    check_index(index);
    check_position(m);
    return (index >> (n_qubits_ - m)) & 1;
  }

  std::vector<int> decode(int index) const {
    check_index(index);
    std::vector<int> bits(n_qubits_);
    for (int m = 1; m <= n_qubits_; ++m) bits[m - 1] = (index >> (n_qubits_ - m)) & 1;
    return bits;
  }

  int encode(std::span<const int> bits) const {
    if (static_cast<int>(bits.size()) != n_qubits_)
      throw std::invalid_argument("QuditIndexCodec: bit-string length mismatch");
    int index = 0;
    for (int m = 1; m <= n_qubits_; ++m) {
      const int b = bits[m - 1];
      if (b != 0 && b != 1) throw std::invalid_argument("QuditIndexCodec: bits must be 0 or 1");
      index |= b << (n_qubits_ - m);
    }
    return index;
  }

  void check_index(int index) const {
    if (index < 0 || index >= dim_)
      throw std::invalid_argument("QuditIndexCodec: outcome index out of range");
  }
  void check_position(int m) const {
    if (m < 1 || m > n_qubits_)
      throw std::invalid_argument("QuditIndexCodec: qubit position out of range");
  }

 private:
  int n_qubits_;
  int dim_;
};

enum class Party { Alice, Bob };

// Measurement label: setting 1 is the computational basis, setting 2 the
// Fourier basis; `outcome` indexes the basis vector.
struct BasisLabel {
  Party party = Party::Alice;
  int setting = 1;
  int outcome = 0;
};

/// Standard basis ket e_j of dimension d = 2^N.
template <typename Scalar = double>
VectorT<Scalar> computational_basis_state(const QuditIndexCodec& codec, int j) {
  codec.check_index(j);
  VectorT<Scalar> state = VectorT<Scalar>::Zero(codec.dim());
  state(j) = ComplexT<Scalar>(1, 0);
  return state;
}

/// Fourier ket for any dimension d >= 2: amplitudes exp(i 2 pi j k / d) / sqrt(d).
template <typename Scalar = double>
VectorT<Scalar> fourier_vector(int dim, int k) {
  if (dim < 2) throw std::invalid_argument("fourier_vector: dimension must be >= 2");
  if (k < 0 || k >= dim) throw std::invalid_argument("fourier_vector: outcome index out of range");
  const Scalar norm = Scalar(1) / std::sqrt(Scalar(dim));
  VectorT<Scalar> state(dim);
  for (int j = 0; j < dim; ++j) {
    const Scalar phase = Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(j) * Scalar(k) / Scalar(dim);
    state(j) = std::polar(norm, phase);
  }
  return state;
}

template <typename Scalar = double>
VectorT<Scalar> fourier_basis_state(const QuditIndexCodec& codec, int k) {
  codec.check_index(k);
  return fourier_vector<Scalar>(codec.dim(), k);
}

/// Product factor of the Fourier ket on qubit m: (|0> + exp(i 2 pi k / 2^m) |1>) / sqrt(2).
template <typename Scalar = double>
VectorT<Scalar> fourier_qubit_factor(const QuditIndexCodec& codec, int m, int k) {
  codec.check_position(m);
  codec.check_index(k);
  const Scalar phase = Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(k) / Scalar(1 << m);
  const Scalar norm = Scalar(1) / std::sqrt(Scalar(2));
  VectorT<Scalar> state(2);
  state(0) = ComplexT<Scalar>(norm, 0);
  state(1) = std::polar(norm, phase);
  return state;
}

/// Basis ket selected by a measurement label (setting 1: computational,
/// setting 2: Fourier). The same bases serve both parties.
template <typename Scalar = double>
VectorT<Scalar> basis_state(const QuditIndexCodec& codec, const BasisLabel& label) {
  if (label.setting == 1) return computational_basis_state<Scalar>(codec, label.outcome);
  if (label.setting == 2) return fourier_basis_state<Scalar>(codec, label.outcome);
  throw std::invalid_argument("basis_state: setting must be 1 or 2");
}

/// Maximally entangled two-qudit ket 1/sqrt(d) sum_j |j>|j>, ordered with all
/// of Alice's qubits before all of Bob's.
template <typename Scalar = double>
VectorT<Scalar> entangled_source(const QuditIndexCodec& codec) {
  const int d = codec.dim();
  const ComplexT<Scalar> amp(Scalar(1) / std::sqrt(Scalar(d)), 0);
  VectorT<Scalar> state = VectorT<Scalar>::Zero(static_cast<Eigen::Index>(d) * d);
  for (int j = 0; j < d; ++j) state(static_cast<Eigen::Index>(j) * d + j) = amp;
  return state;
}

/// (I (x) U) |state> for a two-qudit ket; U acts on the second (Bob) qudit.
template <typename Scalar = double>
VectorT<Scalar> apply_steering_unitary(const VectorT<Scalar>& state, const MatrixT<Scalar>& u) {
  const Eigen::Index d = u.rows();
  if (u.cols() != d || d < 1 || state.size() != d * d)
    throw std::invalid_argument("apply_steering_unitary: dimension mismatch");
  using RowMat = Eigen::Matrix<ComplexT<Scalar>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> coeffs(state.data(), d, d);
  RowMat steered = coeffs * u.transpose();
  return Eigen::Map<const VectorT<Scalar>>(steered.data(), state.size());
}

/// The d = 2 singlet (|01> - |10>) / sqrt(2), invariant under U (x) U up to a
/// global phase. Higher dimensions are unsupported.
template <typename Scalar = double>
VectorT<Scalar> supersinglet(int d) {
  if (d != 2) throw std::invalid_argument("supersinglet: only d = 2 is supported");
  const Scalar norm = Scalar(1) / std::sqrt(Scalar(2));
  VectorT<Scalar> state = VectorT<Scalar>::Zero(4);
  state(1) = ComplexT<Scalar>(norm, 0);
  state(2) = ComplexT<Scalar>(-norm, 0);
  return state;
}

/// Index map between the two-qudit ordering (A qubits 1..N, then B qubits
/// 1..N) and the per-pair ordering ((A_1, B_1), ..., (A_N, B_N)): returns the
/// pair-ordered position carrying the amplitude of qudit-ordered `index`.
inline int pair_interleaved_index(int n_pairs, int index) {
  if (n_pairs < 1 || n_pairs > 8)
    throw std::invalid_argument("pair_interleaved_index: pair count must be in [1, 8]");
  const int total_bits = 2 * n_pairs;
  if (index < 0 || index >= (1 << total_bits))
    throw std::invalid_argument("pair_interleaved_index: index out of range");
  int interleaved = 0;
  for (int m = 1; m <= n_pairs; ++m) {
    const int alice_bit = (index >> (2 * n_pairs - m)) & 1;
    const int bob_bit = (index >> (n_pairs - m)) & 1;
    interleaved |= alice_bit << (total_bits - (2 * m - 1));
    interleaved |= bob_bit << (total_bits - 2 * m);
  }
  return interleaved;
}

/// Reorders a ket from per-pair ordering into the two-qudit ordering.
template <typename Scalar = double>
VectorT<Scalar> regroup_pairs_to_qudit(int n_pairs, const VectorT<Scalar>& pair_ordered) {
  if (pair_ordered.size() != (Eigen::Index{1} << (2 * n_pairs)))
    throw std::invalid_argument("regroup_pairs_to_qudit: dimension mismatch");
  VectorT<Scalar> qudit_ordered(pair_ordered.size());
  for (Eigen::Index j = 0; j < qudit_ordered.size(); ++j)
    qudit_ordered(j) = pair_ordered(pair_interleaved_index(n_pairs, static_cast<int>(j)));
  return qudit_ordered;
}

}  // namespace qsteer
