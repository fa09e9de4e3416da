#pragma once

// Steering witness pipeline: joint-probability tables for the entangled-pair
// and prepare-and-send protocols, the two witness kernels, the unsteerable
// bound 1 + 1/sqrt(d), the kernel/bound ratio and the verdict report.

#include "qsteer/jones.hpp"
#include "qsteer/qudit.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qsteer {

// d x d table of joint outcome probabilities P(a, b) for one measurement
// setting; rows index Alice's outcome, columns Bob's. Entries must lie in
// [0, 1] and sum to 1.
class JointProbabilityTable {
 public:
  JointProbabilityTable(int setting, Eigen::MatrixXd probs, double tol = kDefaultTol);

  int setting() const { return setting_; }
  int dim() const { return static_cast<int>(probs_.rows()); }
  const Eigen::MatrixXd& probs() const { return probs_; }

 private:
  int setting_;
  Eigen::MatrixXd probs_;
};

// Measurement projectors for every (qubit position, outcome index) cell of
// one setting, for both parties. Banks decouple table evaluation from how
// the projectors were built (ideal, rotated on Bob's side, or perturbed).
struct ProjectorBank {
  int setting = 1;
  int n_qubits = 0;
  int dim = 0;
  std::vector<Matrix2> alice;  // indexed (m - 1) * dim + k
  std::vector<Matrix2> bob;

  const Matrix2& alice_projector(int m, int k) const { return alice[(m - 1) * dim + k]; }
  const Matrix2& bob_projector(int m, int k) const { return bob[(m - 1) * dim + k]; }
};

/// Ideal projector bank for one setting.
ProjectorBank make_projector_bank(const QuditIndexCodec& codec, int setting);

/// Bank with Bob's projectors conjugated by per-qubit unitaries, for
/// measurement bases u_m |b>.
ProjectorBank make_projector_bank(const QuditIndexCodec& codec, int setting,
                                  std::span<const Matrix2> bob_rotations);

using QubitChannel = std::function<Matrix2(const Matrix2&)>;

/// Per-qubit source with every photon prepared horizontal (logical |0>).
std::vector<Matrix2> horizontal_source(const QuditIndexCodec& codec);

/// Raw cell matrix of the entangled-pair protocol: P(k, l) is the product
/// over pairs of per-pair joint click probabilities.
Eigen::MatrixXd epr_cell_matrix(const QuditIndexCodec& codec,
                                const std::vector<Matrix4>& pairs,
                                const ProjectorBank& bank);

JointProbabilityTable epr_joint_table(const QuditIndexCodec& codec,
                                      const std::vector<Matrix4>& pairs, int setting);
JointProbabilityTable epr_joint_table(const QuditIndexCodec& codec,
                                      const std::vector<Matrix4>& pairs, int setting,
                                      const ProjectorBank& bank);

/// Raw cell matrix of the prepare-and-send protocol: P(k, l) factorizes as
/// Alice's outcome probability times Bob's conditional probability on the
/// re-prepared qubits after the channel. `prep_dim` restricts Alice's
/// preparations to the subspace spanned by the first prep_dim basis states
/// (0 means unrestricted).
Eigen::MatrixXd ss_cell_matrix(const QuditIndexCodec& codec,
                               const std::vector<Matrix2>& source_qubits,
                               const QubitChannel& channel, int prep_dim,
                               const ProjectorBank& bank);

JointProbabilityTable ss_joint_table(const QuditIndexCodec& codec,
                                     const std::vector<Matrix2>& source_qubits,
                                     const QubitChannel& channel, int setting,
                                     int prep_dim = 0);
JointProbabilityTable ss_joint_table(const QuditIndexCodec& codec,
                                     const std::vector<Matrix2>& source_qubits,
                                     const QubitChannel& channel, int setting, int prep_dim,
                                     const ProjectorBank& bank);

/// Entangled-pair witness kernel: the setting-1 correlated sum (b = a) plus
/// the setting-2 anticorrelated sum (a + b = 0 mod d).
double kernel_epr(const JointProbabilityTable& setting1, const JointProbabilityTable& setting2);

/// Prepare-and-send witness kernel: the correlated sum (b = a) of both settings.
double kernel_ss(const JointProbabilityTable& setting1, const JointProbabilityTable& setting2);

/// Largest kernel value classical mimicry can reach: 1 + 1/sqrt(d).
double classical_bound(int d);

/// Kernel divided by the classical bound; values above 1 certify steering.
double steering_ratio(double kernel, int d);

enum class ExperimentKind { Epr, Ss, LhsBound, LhsSearch };

struct WitnessReport {
  ExperimentKind kind = ExperimentKind::Epr;
  int d = 2;
  double kernel = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  bool steerable = false;

  bool operator==(const WitnessReport&) const = default;
};

/// Assembles bound, ratio and the verdict kernel - bound > z * std_error;
/// margins below the numerical tolerance never certify.
WitnessReport report(ExperimentKind kind, double kernel, double std_error, int d,
                     double z = 3.0);

}  // namespace qsteer
