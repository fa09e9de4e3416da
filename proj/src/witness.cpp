#include "qsteer/witness.hpp"

#include <cmath>
#include <optional>

namespace qsteer {

JointProbabilityTable::JointProbabilityTable(int setting, Eigen::MatrixXd probs, double tol)
    : setting_(setting), probs_(std::move(probs)) {
  if (setting_ != 1 && setting_ != 2)
    throw std::invalid_argument("JointProbabilityTable: setting must be 1 or 2");
  if (probs_.rows() < 2 || probs_.rows() != probs_.cols())
    throw std::invalid_argument("JointProbabilityTable: table must be square with d >= 2");
  if ((probs_.array() < -tol).any() || (probs_.array() > 1.0 + tol).any())
    throw std::invalid_argument("JointProbabilityTable: entries must lie in [0, 1]");
  if (std::abs(probs_.sum() - 1.0) > tol)
    throw std::invalid_argument("JointProbabilityTable: entries must sum to 1");
}

namespace {

void check_setting(int setting) {
  if (setting != 1 && setting != 2)
    throw std::invalid_argument("projector bank: setting must be 1 or 2");
}

Matrix2 ideal_projector(const QuditIndexCodec& codec, int setting, int m, int k) {
  if (setting == 1) return measurement_projector(1, m, codec.bit(k, m));
  return measurement_projector(2, m, k);
}

}  // namespace

ProjectorBank make_projector_bank(const QuditIndexCodec& codec, int setting) {
  return make_projector_bank(codec, setting, {});
}

ProjectorBank make_projector_bank(const QuditIndexCodec& codec, int setting,
                                  std::span<const Matrix2> bob_rotations) {
  check_setting(setting);
  if (!bob_rotations.empty() &&
      static_cast<int>(bob_rotations.size()) != codec.n_qubits())
    throw std::invalid_argument("projector bank: one Bob rotation per qubit expected");
  ProjectorBank bank{setting, codec.n_qubits(), codec.dim(), {}, {}};
  bank.alice.reserve(static_cast<std::size_t>(bank.n_qubits) * bank.dim);
  bank.bob.reserve(static_cast<std::size_t>(bank.n_qubits) * bank.dim);
  for (int m = 1; m <= codec.n_qubits(); ++m) {
    for (int k = 0; k < codec.dim(); ++k) {
      const Matrix2 proj = ideal_projector(codec, setting, m, k);
      bank.alice.push_back(proj);
      if (bob_rotations.empty()) {
        bank.bob.push_back(proj);
      } else {
        const Matrix2& u = bob_rotations[m - 1];
        if (!is_unitary(u))
          throw std::invalid_argument("projector bank: Bob rotations must be unitary");
        bank.bob.push_back(u * proj * u.adjoint());
      }
    }
  }
  return bank;
}

std::vector<Matrix2> horizontal_source(const QuditIndexCodec& codec) {
  Matrix2 h = Matrix2::Zero();
  h(0, 0) = Complex(1, 0);
  return std::vector<Matrix2>(codec.n_qubits(), h);
}

Eigen::MatrixXd epr_cell_matrix(const QuditIndexCodec& codec, const std::vector<Matrix4>& pairs,
                                const ProjectorBank& bank) {
  const int d = codec.dim();
  const int n = codec.n_qubits();
  if (static_cast<int>(pairs.size()) != n)
    throw std::invalid_argument("epr_cell_matrix: one pair state per qubit expected");
  if (bank.dim != d || bank.n_qubits != n)
    throw std::invalid_argument("epr_cell_matrix: projector bank does not match codec");
  for (const auto& pair : pairs)
    if (!is_density_matrix(pair))
      throw std::invalid_argument("epr_cell_matrix: pair states must be density matrices");

  // First pass: per-pair joint probabilities t_m(k, l); cells are products.
  std::vector<Eigen::MatrixXd> per_pair(n, Eigen::MatrixXd(d, d));
  for (int m = 1; m <= n; ++m)
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l)
        per_pair[m - 1](k, l) = pair_joint_probability(
            pairs[m - 1], bank.alice_projector(m, k), bank.bob_projector(m, l));

  Eigen::MatrixXd cells = Eigen::MatrixXd::Ones(d, d);
  for (const auto& t : per_pair) cells.array() *= t.array();
  return cells;
}

JointProbabilityTable epr_joint_table(const QuditIndexCodec& codec,
                                      const std::vector<Matrix4>& pairs, int setting) {
  return epr_joint_table(codec, pairs, setting, make_projector_bank(codec, setting));
}

JointProbabilityTable epr_joint_table(const QuditIndexCodec& codec,
                                      const std::vector<Matrix4>& pairs, int setting,
                                      const ProjectorBank& bank) {
  check_setting(setting);
  if (bank.setting != setting)
    throw std::invalid_argument("epr_joint_table: bank built for a different setting");
  return JointProbabilityTable(setting, epr_cell_matrix(codec, pairs, bank));
}

namespace {

// Pure qubit state Alice re-prepares for outcome k on qubit m. With a
// restricted preparation the state is the normalized projection onto the
// prep subspace; qubits above the restricted count collapse to |0>. A
// setting-1 outcome whose bit falls outside the subspace is unpreparable.
std::optional<Vector2> prepared_factor(const QuditIndexCodec& codec, int setting, int m, int k,
                                       int n_prep_qubits) {
  const bool restricted = m <= codec.n_qubits() - n_prep_qubits;
  if (setting == 1) {
    const int bit = codec.bit(k, m);
    if (restricted && bit == 1) return std::nullopt;
    Vector2 state = Vector2::Zero();
    state(restricted ? 0 : bit) = Complex(1, 0);
    return state;
  }
  if (restricted) {
    Vector2 state = Vector2::Zero();
    state(0) = Complex(1, 0);
    return state;
  }
  return fourier_qubit_factor(codec, m, k);
}

int prep_qubit_count(const QuditIndexCodec& codec, int prep_dim) {
  if (prep_dim == 0) return codec.n_qubits();
  if (prep_dim < 1 || prep_dim > codec.dim() || (prep_dim & (prep_dim - 1)) != 0)
    throw std::invalid_argument(
        "ss_cell_matrix: preparation dimension must be a power of 2 dividing d");
  int n = 0;
  while ((1 << n) != prep_dim) ++n;
  return n;
}

double trace_against(const Matrix2& projector, const Matrix2& rho) {
  return detail::clamp_unit_interval((projector * rho).trace().real(), kDefaultTol);
}

}  // namespace

Eigen::MatrixXd ss_cell_matrix(const QuditIndexCodec& codec,
                               const std::vector<Matrix2>& source_qubits,
                               const QubitChannel& channel, int prep_dim,
                               const ProjectorBank& bank) {
  const int d = codec.dim();
  const int n = codec.n_qubits();
  if (static_cast<int>(source_qubits.size()) != n)
    throw std::invalid_argument("ss_cell_matrix: one source qubit per position expected");
  if (bank.dim != d || bank.n_qubits != n)
    throw std::invalid_argument("ss_cell_matrix: projector bank does not match codec");
  for (const auto& qubit : source_qubits)
    if (!is_density_matrix(qubit))
      throw std::invalid_argument("ss_cell_matrix: source qubits must be density matrices");
  const int n_prep = prep_qubit_count(codec, prep_dim);

  Eigen::MatrixXd cells = Eigen::MatrixXd::Zero(d, d);
  std::vector<Matrix2> bob_qubits(n);
  for (int k = 0; k < d; ++k) {
    double p_alice = 1.0;
    for (int m = 1; m <= n; ++m)
      p_alice *= trace_against(bank.alice_projector(m, k), source_qubits[m - 1]);
    if (p_alice == 0.0) continue;

    bool preparable = true;
    for (int m = 1; m <= n; ++m) {
      const auto factor = prepared_factor(codec, bank.setting, m, k, n_prep);
      if (!factor) {
        preparable = false;
        break;
      }
      const Matrix2 prepared = *factor * factor->adjoint();
      bob_qubits[m - 1] = channel ? channel(prepared) : prepared;
      if (!is_density_matrix(bob_qubits[m - 1]))
        throw std::invalid_argument("ss_cell_matrix: channel output is not a density matrix");
    }
    if (!preparable) continue;

    for (int l = 0; l < d; ++l) {
      double p_bob = 1.0;
      for (int m = 1; m <= n; ++m)
        p_bob *= trace_against(bank.bob_projector(m, l), bob_qubits[m - 1]);
      cells(k, l) = p_alice * p_bob;
    }
  }
  return cells;
}

JointProbabilityTable ss_joint_table(const QuditIndexCodec& codec,
                                     const std::vector<Matrix2>& source_qubits,
                                     const QubitChannel& channel, int setting, int prep_dim) {
  return ss_joint_table(codec, source_qubits, channel, setting, prep_dim,
                        make_projector_bank(codec, setting));
}

JointProbabilityTable ss_joint_table(const QuditIndexCodec& codec,
                                     const std::vector<Matrix2>& source_qubits,
                                     const QubitChannel& channel, int setting, int prep_dim,
                                     const ProjectorBank& bank) {
  check_setting(setting);
  if (bank.setting != setting)
    throw std::invalid_argument("ss_joint_table: bank built for a different setting");
  return JointProbabilityTable(
      setting, ss_cell_matrix(codec, source_qubits, channel, prep_dim, bank));
}

namespace {

void check_table_pair(const JointProbabilityTable& setting1,
                      const JointProbabilityTable& setting2) {
  if (setting1.setting() != 1 || setting2.setting() != 2)
    throw std::invalid_argument("witness kernel: expected tables for settings 1 and 2");
  if (setting1.dim() != setting2.dim())
    throw std::invalid_argument("witness kernel: tables have mismatched dimensions");
}

}  // namespace

double kernel_epr(const JointProbabilityTable& setting1, const JointProbabilityTable& setting2) {
  check_table_pair(setting1, setting2);
  const int d = setting1.dim();
  double correlated = setting1.probs().diagonal().sum();
  for (int a = 0; a < d; ++a) correlated += setting2.probs()(a, (d - a) % d);
  return correlated;
}

double kernel_ss(const JointProbabilityTable& setting1, const JointProbabilityTable& setting2) {
  check_table_pair(setting1, setting2);
  return setting1.probs().diagonal().sum() + setting2.probs().diagonal().sum();
}

double classical_bound(int d) {
  if (d < 2) throw std::invalid_argument("classical_bound: dimension must be >= 2");
  return 1.0 + 1.0 / std::sqrt(static_cast<double>(d));
}

double steering_ratio(double kernel, int d) {
  return kernel / classical_bound(d);
}

WitnessReport report(ExperimentKind kind, double kernel, double std_error, int d, double z) {
  if (kernel < -kDefaultTol || kernel > 2.0 + kDefaultTol)
    throw std::invalid_argument("report: kernel must lie in [0, 2]");
  if (std_error < 0.0) throw std::invalid_argument("report: std_error must be >= 0");
  if (z <= 0.0) throw std::invalid_argument("report: z threshold must be positive");
  WitnessReport rep;
  rep.kind = kind;
  rep.d = d;
  rep.kernel = kernel;
  rep.std_error = std_error;
  rep.bound = classical_bound(d);
  rep.ratio = steering_ratio(kernel, d);
  // margins inside the numerical tolerance count as sitting on the bound
  rep.steerable = kernel - rep.bound > std::max(z * std_error, kDefaultTol);
  return rep;
}

}  // namespace qsteer
